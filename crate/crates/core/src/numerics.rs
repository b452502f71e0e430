//! Radial integrals with a sharp cutoff, adaptive Gauss–Kronrod quadrature
//! and a bracketed scalar root finder.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid radial integral: {0}")]
    InvalidSpec(String),
    #[error("radial integral diverges for power 0 at zero pole scale")]
    Divergent,
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
    #[error("root finder did not converge after {iterations} iterations (bracket width {width})")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("objective is not finite at x = {0}")]
    NonFinite(f64),
    #[error("quadrature did not reach tolerance {tol} (error estimate {estimate})")]
    QuadratureBudget { tol: f64, estimate: f64 },
}

/// ∫₀^Λ k^p / (k² + χ²) dk for p ∈ {0, 2, 4, 6}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegralSpec {
    pub power: u32,
    pub cutoff: f64,
    pub pole_scale: f64,
}

impl RadialIntegralSpec {
    pub fn new(power: u32, cutoff: f64, pole_scale: f64) -> Result<Self, NumericsError> {
        let spec = Self { power, cutoff, pole_scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if self.power % 2 != 0 || self.power > 6 {
            return Err(NumericsError::InvalidSpec(format!(
                "power must be one of 0, 2, 4, 6 (got {})",
                self.power
            )));
        }
        if !(self.cutoff > 0.0) || !self.cutoff.is_finite() {
            return Err(NumericsError::InvalidSpec(format!("cutoff must be positive (got {})", self.cutoff)));
        }
        if !(self.pole_scale >= 0.0) || !self.pole_scale.is_finite() {
            return Err(NumericsError::InvalidSpec(format!(
                "pole scale must be non-negative (got {})",
                self.pole_scale
            )));
        }
        Ok(())
    }
}

// Past this ratio the alternating series in (Λ/χ)² is cheaper and free of
// the cancellation that hits the closed forms.
const SERIES_SWITCH: f64 = 1.5;

/// Dimensionless J_p(a) = ∫₀¹ t^p / (t² + a²) dt.
pub fn scaled_radial_integral(power: u32, a: f64) -> Result<f64, NumericsError> {
    if power % 2 != 0 || power > 6 {
        return Err(NumericsError::InvalidSpec(format!("power {power} not supported")));
    }
    if !(a >= 0.0) {
        return Err(NumericsError::InvalidSpec(format!("pole ratio must be non-negative (got {a})")));
    }
    if a == 0.0 {
        return if power == 0 { Err(NumericsError::Divergent) } else { Ok(1.0 / f64::from(power - 1)) };
    }
    if a > SERIES_SWITCH {
        let x = 1.0 / (a * a);
        let mut sum = 0.0;
        let mut term_scale = 1.0;
        for n in 0..400u32 {
            let term = term_scale / f64::from(power + 1 + 2 * n);
            sum += if n % 2 == 0 { term } else { -term };
            if term < 1e-18 * sum.abs() {
                break;
            }
            term_scale *= x;
        }
        return Ok(sum * x);
    }
    // J_0 = atan(1/a)/a, J_{p+2} = 1/(p+1) − a² J_p
    let at = (1.0 / a).atan();
    let mut j = 1.0 - a * at;
    if power == 0 {
        return Ok(at / a);
    }
    let mut p = 2;
    while p < power {
        j = 1.0 / f64::from(p + 1) - a * a * j;
        p += 2;
    }
    Ok(j)
}

/// Closed-form radial integral; no angular factor.
pub fn radial_integral(spec: &RadialIntegralSpec) -> Result<f64, NumericsError> {
    spec.validate()?;
    let a = spec.pole_scale / spec.cutoff;
    let j = scaled_radial_integral(spec.power, a)?;
    Ok(j * spec.cutoff.powi(spec.power as i32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tolerance: f64) -> Self {
        Self { lo, hi, tolerance, max_iterations: 200 }
    }
}

/// Bisection safeguarded secant. The secant candidate is only taken when it
/// lands strictly inside the current bracket and the previous step halved
/// the bracket at least as well as bisection would have.
pub fn find_root<F: FnMut(f64) -> f64>(mut objective: F, bracket: &RootBracket) -> Result<f64, NumericsError> {
    let RootBracket { lo, hi, tolerance, max_iterations } = *bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidBracket(format!("need lo < hi (got [{lo}, {hi}])")));
    }
    if !(tolerance > 0.0) {
        return Err(NumericsError::InvalidBracket(format!("tolerance must be positive (got {tolerance})")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = objective(a);
    let mut fb = objective(b);
    if !fa.is_finite() {
        return Err(NumericsError::NonFinite(a));
    }
    if !fb.is_finite() {
        return Err(NumericsError::NonFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }
    let mut last_width = b - a;
    let mut use_secant = true;
    for _ in 0..max_iterations {
        let width = b - a;
        if width <= tolerance {
            return Ok(0.5 * (a + b));
        }
        let mid = 0.5 * (a + b);
        let mut x = mid;
        if use_secant {
            let s = b - fb * (b - a) / (fb - fa);
            if s.is_finite() && s > a && s < b {
                x = s;
            }
        }
        if x == a || x == b {
            x = mid;
        }
        let fx = objective(x);
        if !fx.is_finite() {
            return Err(NumericsError::NonFinite(x));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        let new_width = b - a;
        // fall back to a bisection step whenever the secant stalls
        use_secant = new_width <= 0.5 * last_width;
        last_width = new_width;
    }
    if b - a <= tolerance {
        Ok(0.5 * (a + b))
    } else {
        Err(NumericsError::NoConvergence { iterations: max_iterations, width: b - a })
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod 7/15 with an absolute tolerance. Intervals are
/// split until the sum of local error estimates is below `tol`.
pub fn quadrature<F: FnMut(f64) -> f64>(mut integrand: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumericsError> {
    if lo == hi {
        return Ok(0.0);
    }
    if hi < lo {
        return quadrature(integrand, hi, lo, tol).map(|v| -v);
    }
    const MAX_INTERVALS: usize = 5000;
    let (v, e) = gk15(&mut integrand, lo, hi);
    let mut intervals = vec![(lo, hi, v, e)];
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            break;
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(NumericsError::QuadratureBudget { tol, estimate: total_err });
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty interval list");
        let (a, b, _, _) = intervals.swap_remove(idx);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
            return Err(NumericsError::QuadratureBudget { tol, estimate: total_err });
        }
        let (v1, e1) = gk15(&mut integrand, a, m);
        let (v2, e2) = gk15(&mut integrand, m, b);
        intervals.push((a, m, v1, e1));
        intervals.push((m, b, v2, e2));
    }
    let mut values: Vec<f64> = intervals.iter().map(|iv| iv.2).collect();
    values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(values.iter().sum())
}

/// `n` points from `lo` to `hi`, linear or geometric.
pub fn grid(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if log {
                    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + t * (hi - lo)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oracle(power: u32, cutoff: f64, chi: f64) -> f64 {
        let tol = 1e-13 * radial_integral(&RadialIntegralSpec::new(power, cutoff, chi).unwrap()).unwrap().abs();
        quadrature(|k| k.powi(power as i32) / (k * k + chi * chi), 0.0, cutoff, tol).unwrap()
    }

    #[test]
    fn closed_forms_at_simple_points() {
        let r = |p, l, c| radial_integral(&RadialIntegralSpec::new(p, l, c).unwrap()).unwrap();
        assert!((r(4, 1.0, 0.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((r(2, 1.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((r(2, 1.0, 1.0) - (1.0 - std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
        assert!((r(0, 1.0, 1.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(r(2, 1.0, 1e9) < 1e-18);
        assert!((r(2, 1.0, 1e4) * 3.0 * 1e8 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn power_zero_at_zero_pole_is_divergent() {
        let spec = RadialIntegralSpec::new(0, 1.0, 0.0).unwrap();
        assert_eq!(radial_integral(&spec), Err(NumericsError::Divergent));
        assert!(RadialIntegralSpec::new(3, 1.0, 0.0).is_err());
        assert!(RadialIntegralSpec::new(2, 0.0, 0.0).is_err());
        assert!(RadialIntegralSpec::new(2, 1.0, -1.0).is_err());
    }

    #[test]
    fn agrees_with_quadrature_across_pole_ratios() {
        for power in [0u32, 2, 4, 6] {
            for ratio in [0.0, 1e-6, 0.1, 1.0, 1.4, 1.6, 10.0] {
                if power == 0 && ratio == 0.0 {
                    continue;
                }
                for cutoff in [0.3, 1.0, 2.7] {
                    let chi = ratio * cutoff;
                    let exact = radial_integral(&RadialIntegralSpec::new(power, cutoff, chi).unwrap()).unwrap();
                    let q = oracle(power, cutoff, chi);
                    assert!(
                        ((exact - q) / q).abs() < 1e-9,
                        "p={power} ratio={ratio} cutoff={cutoff}: {exact} vs {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn quadrature_basics() {
        assert!((quadrature(|_| 1.0, 0.0, 1.0, 1e-14).unwrap() - 1.0).abs() < 1e-14);
        assert!((quadrature(f64::sin, 0.0, std::f64::consts::PI, 1e-13).unwrap() - 2.0).abs() < 1e-12);
        let closed = scaled_radial_integral(4, 0.5).unwrap();
        let q = quadrature(|t| t.powi(4) / (t * t + 0.25), 0.0, 1.0, 1e-13).unwrap();
        assert!((q - closed).abs() < 1e-10);
        assert!((quadrature(|t| t, 1.0, 0.0, 1e-14).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_reports_budget_exhaustion() {
        // log-divergent: every refinement near 0 keeps a finite error
        let r = quadrature(|t| 1.0 / t, 0.0, 1.0, 1e-8);
        assert!(matches!(r, Err(NumericsError::QuadratureBudget { .. })));
    }

    #[test]
    fn root_examples() {
        let r = find_root(|x| x * x - 2.0, &RootBracket::new(1.0, 2.0, 1e-14)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let gcr = find_root(|g| g * g - 3.25 * g - 2.0, &RootBracket::new(3.0, 5.0, 1e-14)).unwrap();
        assert!((gcr - (13.0 + 297f64.sqrt()) / 8.0).abs() < 1e-13);
        assert!((gcr - 3.77921).abs() < 1e-5);
        let none = find_root(|x| x * x + 1.0, &RootBracket::new(0.0, 1.0, 1e-12));
        assert!(matches!(none, Err(NumericsError::NoSignChange { .. })));
        let bad = find_root(|x| x, &RootBracket::new(1.0, 0.0, 1e-12));
        assert!(matches!(bad, Err(NumericsError::InvalidBracket(_))));
    }

    #[test]
    fn root_iteration_budget() {
        let b = RootBracket { lo: 0.0, hi: 1.0, tolerance: 1e-300, max_iterations: 5 };
        let r = find_root(|x| (x - 0.3).powi(3), &b);
        assert!(matches!(r, Err(NumericsError::NoConvergence { .. })));
    }

    #[test]
    fn root_is_deterministic() {
        let f = |x: f64| (x - 0.123).tanh() + 0.01 * x.powi(3);
        let b = RootBracket::new(-3.0, 4.0, 1e-15);
        let r1 = find_root(f, &b).unwrap();
        let r2 = find_root(f, &b).unwrap();
        assert_eq!(r1.to_bits(), r2.to_bits());
    }

    proptest! {
        #[test]
        fn monotone_in_pole_and_cutoff(p in prop::sample::select(vec![2u32, 4, 6]),
                                       cutoff in 0.1f64..10.0,
                                       chi in 0.0f64..20.0,
                                       bump in 1.001f64..2.0) {
            let r = |l: f64, c: f64| radial_integral(&RadialIntegralSpec::new(p, l, c).unwrap()).unwrap();
            prop_assert!(r(cutoff, chi * bump + 1e-3) < r(cutoff, chi));
            prop_assert!(r(cutoff * bump, chi) > r(cutoff, chi));
        }

        #[test]
        fn finder_stays_in_bracket(root in -5.0f64..5.0, scale in 0.1f64..10.0) {
            let b = RootBracket::new(-6.0, 6.0, 1e-13);
            let x = find_root(|x| scale * (x - root) + (x - root).powi(3), &b).unwrap();
            prop_assert!((x - root).abs() < 1e-12);
        }
    }
}
