//! Two-particle bound states with the separable kernel
//! s + (k² + q² + 2k·q)/(4m²c²), at zero total momentum.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::model::{dispersion, Affine, ModelScheme, SpectrumBranch};
use crate::numerics::{find_root, grid, quadrature, scaled_radial_integral, NumericsError, RootBracket};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundStateError {
    #[error("no sign change of the determinant over the scanned range (G = {coupling}); scan: {scan:?}")]
    Bracketing { coupling: f64, scan: Vec<(f64, f64)> },
    #[error("pair propagator has non-positive k² coefficient {0}; no threshold from below")]
    Propagator(f64),
    #[error("bound state does not exist")]
    Missing,
    #[error("degenerate null space: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Isoscalar,
    Isovector,
}

impl std::str::FromStr for Channel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "isoscalar" => Ok(Channel::Isoscalar),
            "isovector" => Ok(Channel::Isovector),
            other => Err(format!("unknown channel '{other}' (expected isoscalar or isovector)")),
        }
    }
}

/// Which c₁ enters the transcendental equation. `Printed` lacks the overall
/// factor G and never exceeds 0.9, so it admits no root at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum C1Variant {
    #[default]
    Corrected,
    Printed,
}

impl std::str::FromStr for C1Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "corrected" => Ok(C1Variant::Corrected),
            "printed" => Ok(C1Variant::Printed),
            other => Err(format!("unknown c1 variant '{other}' (expected corrected or printed)")),
        }
    }
}

/// Pair of branches with the sign of the density-density part of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSector {
    /// E₁(k) + E₂(−k) as an affine function of k²
    pub propagator: Affine,
    pub density_sign: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BrokenPair {
    AA,
    AAtilde,
    AtildeAtilde,
}

impl PairSector {
    /// BB, B̃B̃ and BB̃ all share this sector.
    pub fn restored(scheme: &ModelScheme) -> Self {
        let b = dispersion(SpectrumBranch::B, scheme);
        Self { propagator: Affine { k2_coeff: 2.0 * b.k2_coeff, gap: 2.0 * b.gap }, density_sign: 1.0 }
    }

    pub fn broken(scheme: &ModelScheme, pair: BrokenPair) -> Self {
        let a = dispersion(SpectrumBranch::A, scheme);
        let at = dispersion(SpectrumBranch::Atilde, scheme);
        let (x, y, sign) = match pair {
            BrokenPair::AA => (a, a, 1.0),
            BrokenPair::AtildeAtilde => (at, at, 1.0),
            BrokenPair::AAtilde => (a, at, -1.0),
        };
        Self { propagator: Affine { k2_coeff: x.k2_coeff + y.k2_coeff, gap: x.gap + y.gap }, density_sign: sign }
    }

    /// χ from the pair energy μ: propagator − μ = a(k² + χ²).
    pub fn chi_of(&self, mu: f64) -> f64 {
        ((self.propagator.gap - mu) / self.propagator.k2_coeff).max(0.0).sqrt()
    }

    pub fn mu_of(&self, chi: f64) -> f64 {
        self.propagator.gap - self.propagator.k2_coeff * chi * chi
    }
}

/// The four integrals of the isoscalar system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralsI {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl IntegralsI {
    pub fn determinant(&self) -> f64 {
        (self.i1 - 1.0) * (self.i4 - 1.0) - self.i2 * self.i3
    }
}

fn radial(scheme: &ModelScheme, power: u32, chi: f64) -> Result<f64, NumericsError> {
    let l = scheme.cutoff;
    Ok(scaled_radial_integral(power, chi / l)? * l.powi(power as i32 - 1))
}

/// Integrals for a general sector; measure λ·2/(2π)³ with the angular 4π.
pub fn integrals_for(scheme: &ModelScheme, sector: &PairSector, chi: f64) -> Result<IntegralsI, BoundStateError> {
    let a = sector.propagator.k2_coeff;
    if !(a > 0.0) {
        return Err(BoundStateError::Propagator(a));
    }
    let kappa = scheme.kappa();
    let pre = scheme.bare.lambda / (PI * PI * a);
    let s = sector.density_sign;
    let r2 = radial(scheme, 2, chi)?;
    let r4 = radial(scheme, 4, chi)?;
    let r6 = radial(scheme, 6, chi)?;
    Ok(IntegralsI {
        i1: pre * (s * r2 + r4 / kappa),
        i2: pre * (s * r4 + r6 / kappa),
        i3: pre * r2 / kappa,
        i4: pre * r4 / kappa,
    })
}

/// Integrals with the restored-sector propagator (k² + χ²)/M.
pub fn integrals_i(scheme: &ModelScheme, chi: f64) -> IntegralsI {
    integrals_for(scheme, &PairSector::restored(scheme), chi).expect("restored propagator has positive slope")
}

pub fn isoscalar_determinant(scheme: &ModelScheme, chi: f64) -> f64 {
    integrals_i(scheme, chi).determinant()
}

pub fn c1(coupling: f64, variant: C1Variant) -> f64 {
    let s = (1.0 + coupling).sqrt();
    let base = 0.45 * (3.0 + 2.0 * coupling + s) / (1.0 + coupling + s);
    match variant {
        C1Variant::Corrected => coupling * base,
        C1Variant::Printed => base,
    }
}

pub fn c2(coupling: f64) -> f64 {
    0.75 * coupling * (1.0 + 2.0 / (1.0 + (1.0 + coupling).sqrt()))
}

/// (z²c₁ − c₂)(z − arctan z) − z³
pub fn transcendental_residual(coupling: f64, z: f64, variant: C1Variant) -> f64 {
    (z * z * c1(coupling, variant) - c2(coupling)) * (z - z.atan()) - z * z * z
}

/// Relative mismatch of the χ-equation obtained by eliminating A and B.
pub fn chi_equation_residual(scheme: &ModelScheme, chi: f64) -> f64 {
    let kappa = scheme.kappa();
    let lhs = scheme.bare.lambda * scheme.mass * radial(scheme, 2, chi).unwrap_or(f64::NAN) / (2.0 * PI * PI);
    let mg = scheme.mass * scheme.g / kappa;
    let rhs = (mg - 0.5).powi(2) / (0.5 - chi * chi / kappa + mg * (scheme.k2_avg + chi * chi) / kappa);
    ((lhs - rhs) / lhs).abs()
}

/// G above which the isoscalar state exists: c₁(G) = 1.
pub fn existence_threshold(variant: C1Variant) -> Option<f64> {
    match variant {
        C1Variant::Printed => None,
        C1Variant::Corrected => Some(
            find_root(|g| c1(g, C1Variant::Corrected) - 1.0, &RootBracket::new(1.0, 2.0, 1e-15))
                .expect("c1 crosses 1 on [1, 2]"),
        ),
    }
}

/// Root of the transcendental equation alone, bracketed on [z_lo, z_hi].
pub fn solve_transcendental(coupling: f64, variant: C1Variant) -> Option<f64> {
    let c = c1(coupling, variant);
    if c <= 1.0 {
        return None;
    }
    let f = |z: f64| transcendental_residual(coupling, z, variant) / (z * z * z);
    let mut hi = 2.0 * (PI * c / (2.0 * (c - 1.0))).max(1.0);
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    find_root(f, &RootBracket::new(1e-3, hi, 1e-14 * hi)).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub note: String,
    pub determinant: Option<f64>,
    pub chi_equation: Option<f64>,
    pub transcendental: Option<f64>,
    /// sup over χ ≥ 0 of the isovector right-hand side
    pub sup_rhs: Option<f64>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateResult {
    pub channel: Channel,
    pub chi: f64,
    pub mu0: f64,
    pub z: f64,
    pub exists: bool,
    pub diagnostics: Diagnostics,
}

const SCAN_POINTS: usize = 200;
const SCAN_HI: f64 = 10.0;

/// Isoscalar state of the restored sector: root of the determinant in χ.
pub fn solve_isoscalar(scheme: &ModelScheme) -> Result<BoundStateResult, BoundStateError> {
    let coupling = scheme.coupling;
    let threshold = existence_threshold(C1Variant::Corrected);
    let c = c1(coupling, C1Variant::Corrected);
    if coupling <= 0.0 || c <= 1.0 {
        return Ok(BoundStateResult {
            channel: Channel::Isoscalar,
            chi: 0.0,
            mu0: 2.0 * scheme.rest_energy(),
            z: f64::INFINITY,
            exists: false,
            diagnostics: Diagnostics {
                note: format!("G = {coupling} is at or below the existence threshold (c1 = {c:.6} <= 1)"),
                determinant: None,
                chi_equation: None,
                transcendental: None,
                sup_rhs: None,
                threshold,
            },
        });
    }
    let lambda_cut = scheme.cutoff;
    let z_est = PI * c / (2.0 * (c - 1.0));
    let lo = (1e-6f64).min(0.1 / z_est);
    let ratios = grid(lo, SCAN_HI, SCAN_POINTS, true);
    let det = |r: f64| isoscalar_determinant(scheme, r * lambda_cut);
    let scan: Vec<(f64, f64)> = ratios.iter().map(|&r| (r, det(r))).collect();
    let cell = scan.windows(2).find(|w| w[0].1.signum() != w[1].1.signum());
    let Some(w) = cell else {
        return Err(BoundStateError::Bracketing { coupling, scan });
    };
    let (r_lo, r_hi) = (w[0].0, w[1].0);
    let t = find_root(|lr: f64| det(lr.exp()), &RootBracket::new(r_lo.ln(), r_hi.ln(), 1e-15))?;
    let chi = t.exp() * lambda_cut;
    let z = lambda_cut / chi;
    Ok(BoundStateResult {
        channel: Channel::Isoscalar,
        chi,
        mu0: 2.0 * scheme.rest_energy() - chi * chi / scheme.mass,
        z,
        exists: true,
        diagnostics: Diagnostics {
            note: "root of the 2x2 determinant".into(),
            determinant: Some(isoscalar_determinant(scheme, chi)),
            chi_equation: Some(chi_equation_residual(scheme, chi)),
            transcendental: Some((transcendental_residual(coupling, z, C1Variant::Corrected) / (z * z * z)).abs()),
            sup_rhs: None,
            threshold,
        },
    })
}

/// Right-hand side of the isovector condition in dimensionless form.
pub fn isovector_rhs(coupling: f64, chi_over_cutoff: f64) -> f64 {
    let s = (1.0 + coupling).sqrt();
    2.0 * coupling / ((1.0 + s) * (1.0 + s)) * scaled_radial_integral(4, chi_over_cutoff).expect("power 4")
}

/// The isovector condition 1 = RHS(G, χ) has no solution: RHS < 2/3.
pub fn solve_isovector(scheme: &ModelScheme) -> BoundStateResult {
    // RHS decreases with χ, so the supremum sits at χ = 0
    let sup = isovector_rhs(scheme.coupling, 0.0);
    BoundStateResult {
        channel: Channel::Isovector,
        chi: 0.0,
        mu0: 2.0 * scheme.rest_energy(),
        z: f64::INFINITY,
        exists: false,
        diagnostics: Diagnostics {
            note: format!("sup of the right-hand side is {sup:.6} < 2/3 < 1"),
            determinant: None,
            chi_equation: None,
            transcendental: None,
            sup_rhs: Some(sup),
            threshold: None,
        },
    }
}

pub fn solve(scheme: &ModelScheme, channel: Channel) -> Result<BoundStateResult, BoundStateError> {
    match channel {
        Channel::Isoscalar => solve_isoscalar(scheme),
        Channel::Isovector => Ok(solve_isovector(scheme)),
    }
}

/// Published (G, z) pairs.
pub const TABLE1_QUOTED: [(f64, f64); 12] = [
    (1.2, 175.0),
    (1.3, 18.5),
    (1.4, 10.5),
    (2.0, 3.8),
    (3.0, 2.7),
    (4.0, 2.0),
    (5.0, 1.85),
    (6.0, 1.7),
    (7.0, 1.65),
    (8.0, 1.55),
    (9.0, 1.48),
    (10.0, 1.44),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub coupling: f64,
    pub z: Option<f64>,
    pub z_quoted: Option<f64>,
    /// (z − z_quoted)/z_quoted
    pub deviation: Option<f64>,
}

pub fn quoted_z(coupling: f64) -> Option<f64> {
    TABLE1_QUOTED.iter().find(|(g, _)| (g - coupling).abs() < 1e-12).map(|&(_, z)| z)
}

/// z(G) by the determinant route (corrected) or the printed transcendental
/// equation (which has no roots); `None` when no bound state exists.
pub fn table1(couplings: &[f64], variant: C1Variant) -> Result<Vec<Table1Row>, BoundStateError> {
    couplings
        .iter()
        .map(|&g| {
            let z = match variant {
                C1Variant::Corrected => {
                    let scheme = crate::model::scheme_from_physical(1.0, g, 1.0)
                        .map_err(|e| BoundStateError::Degenerate(e.to_string()))?;
                    let r = solve_isoscalar(&scheme)?;
                    r.exists.then_some(r.z)
                }
                C1Variant::Printed => solve_transcendental(g, variant),
            };
            let z_quoted = quoted_z(g);
            let deviation = match (z, z_quoted) {
                (Some(z), Some(q)) => Some((z - q) / q),
                _ => None,
            };
            Ok(Table1Row { coupling: g, z, z_quoted, deviation })
        })
        .collect()
}

/// Isoscalar form factor F(k) = A + k²B with A = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavefunction {
    pub channel: Channel,
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub chi: f64,
    pub mass: f64,
    pub cutoff: f64,
    /// max over a 32-point grid of |F − kernel·D| / max|F|
    pub self_consistency: f64,
    /// ∫_{|k|<Λ} D² d³k
    pub norm_squared: f64,
}

impl Wavefunction {
    pub fn form_factor(&self, k: f64) -> f64 {
        self.coeff_a + k * k * self.coeff_b
    }

    /// D(k) = 2F(k)/(2E(k) − μ)
    pub fn amplitude(&self, k: f64) -> f64 {
        2.0 * self.form_factor(k) * self.mass / (k * k + self.chi * self.chi)
    }
}

pub fn wavefunction(scheme: &ModelScheme, result: &BoundStateResult) -> Result<Wavefunction, BoundStateError> {
    if !result.exists {
        return Err(BoundStateError::Missing);
    }
    if result.channel != Channel::Isoscalar {
        return Err(BoundStateError::Degenerate("isovector states do not exist".into()));
    }
    let chi = result.chi;
    let l2 = scheme.cutoff * scheme.cutoff;
    let ii = integrals_i(scheme, chi);
    // rows in terms of B̂ = BΛ², all entries dimensionless
    let row1 = (ii.i1 - 1.0, ii.i2 / l2);
    let row2 = (ii.i3 * l2, ii.i4 - 1.0);
    let scale = [row1.0, row1.1, row2.0, row2.1].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale < 1e-12 {
        return Err(BoundStateError::Degenerate("the 2x2 system vanishes identically".into()));
    }
    let b_hat = if row1.1.abs() >= row2.1.abs() { -row1.0 / row1.1 } else { -row2.0 / row2.1 };
    let mut wf = Wavefunction {
        channel: Channel::Isoscalar,
        coeff_a: 1.0,
        coeff_b: b_hat / l2,
        chi,
        mass: scheme.mass,
        cutoff: scheme.cutoff,
        self_consistency: f64::NAN,
        norm_squared: f64::NAN,
    };
    let kappa = scheme.kappa();
    let lam = scheme.bare.lambda;
    let tol = 1e-12;
    let w0 = quadrature(|q| q * q * wf.amplitude(q), 0.0, scheme.cutoff, tol * l2)?;
    let w2 = quadrature(|q| q.powi(4) * wf.amplitude(q), 0.0, scheme.cutoff, tol * l2 * l2)?;
    let fmax = grid(0.0, scheme.cutoff, 32, false).iter().fold(0.0f64, |a, &k| a.max(wf.form_factor(k).abs()));
    let mut worst = 0.0f64;
    for k in grid(0.0, scheme.cutoff, 32, false) {
        // λ/(2π)³ ∫ d³q D(q)[1 + (k² + q²)/κ]; the k·q term averages out
        let rebuilt = lam / (2.0 * PI * PI) * ((1.0 + k * k / kappa) * w0 + w2 / kappa);
        worst = worst.max((rebuilt - wf.form_factor(k)).abs() / fmax);
    }
    wf.self_consistency = worst;
    wf.norm_squared =
        4.0 * PI * quadrature(|q| (q * wf.amplitude(q)).powi(2), 0.0, scheme.cutoff, 1e-10 * wf.amplitude(0.0).powi(2))?;
    Ok(wf)
}

/// Discrete-mode version of the pair problem: sums over a finite momentum
/// set with weight 2λ/Ω replace the integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePair {
    pub momenta: Vec<Vec<f64>>,
    /// E₁(k) + E₂(−k) at each momentum
    pub propagator: Vec<f64>,
    pub coupling: f64,
    pub kappa: f64,
    pub density_sign: f64,
}

impl DiscretePair {
    fn basis_a(&self, k: &[f64]) -> Vec<f64> {
        let mut v = vec![1.0, k.iter().map(|x| x * x).sum()];
        v.extend_from_slice(k);
        v
    }

    fn basis_b(&self, k: &[f64]) -> Vec<f64> {
        let k2: f64 = k.iter().map(|x| x * x).sum();
        let mut v = vec![self.density_sign + k2 / self.kappa, 1.0 / self.kappa];
        v.extend(k.iter().map(|x| 2.0 * x / self.kappa));
        v
    }

    pub fn kernel(&self, k: &[f64], q: &[f64]) -> f64 {
        self.basis_a(k).iter().zip(self.basis_b(q)).map(|(a, b)| a * b).sum()
    }

    /// det(I − N(μ)) of the reduced separable system.
    pub fn determinant(&self, mu: f64) -> f64 {
        let d = self.momenta.first().map_or(0, Vec::len) + 2;
        let mut n = nalgebra::DMatrix::<f64>::identity(d, d);
        for (k, &p) in self.momenta.iter().zip(&self.propagator) {
            let a = self.basis_a(k);
            let b = self.basis_b(k);
            let w = self.coupling / (p - mu);
            for i in 0..d {
                for j in 0..d {
                    n[(i, j)] -= w * b[i] * a[j];
                }
            }
        }
        n.determinant()
    }

    /// Lowest μ below every pole where the determinant vanishes.
    pub fn lowest_root(&self) -> Option<f64> {
        let p_min = self.propagator.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = self.propagator.iter().fold(1.0f64, |a, p| a.max(p.abs())) + self.coupling;
        let mut span = scale;
        while self.determinant(p_min - span) <= 0.0 {
            span *= 2.0;
            if span > 1e12 * scale {
                return None;
            }
        }
        let dists = grid(span, 1e-13 * scale, 600, true);
        let mut prev = (dists[0], self.determinant(p_min - dists[0]));
        for &d in &dists[1..] {
            let v = self.determinant(p_min - d);
            if v.signum() != prev.1.signum() {
                let root = find_root(
                    |mu| self.determinant(mu),
                    &RootBracket { lo: p_min - prev.0, hi: p_min - d, tolerance: 1e-15 * scale, max_iterations: 400 },
                )
                .ok()?;
                return Some(root);
            }
            prev = (d, v);
        }
        None
    }

    /// Eigenvalues of P(k)δ − (2λ/Ω)K(k, q) over the relative momenta.
    pub fn relative_spectrum(&self) -> Vec<f64> {
        let n = self.momenta.len();
        let h = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { self.propagator[i] } else { 0.0 };
            diag - self.coupling * self.kernel(&self.momenta[i], &self.momenta[j])
        });
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{scheme_from_physical, BareParams};
    use proptest::prelude::*;

    fn scheme(g: f64) -> ModelScheme {
        scheme_from_physical(1.0, g, 1.0).unwrap()
    }

    #[test]
    fn decomposition_identity_and_free_limit() {
        let s = scheme(2.0);
        let ii = integrals_i(&s, s.cutoff / 3.8);
        assert!((ii.i1 - s.kappa() * ii.i3 - ii.i4).abs() < 1e-14 * ii.i1);
        assert!(ii.i1 > 0.0 && ii.i2 > 0.0 && ii.i3 > 0.0 && ii.i4 > 0.0);
        let free = crate::model::renormalize(&BareParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        let z = integrals_i(&free, 0.5);
        assert_eq!((z.i1, z.i2, z.i3, z.i4), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(z.determinant(), 1.0);
    }

    #[test]
    fn integrals_match_quadrature() {
        let s = scheme(2.0);
        let chi = s.cutoff / 3.8;
        let ii = integrals_i(&s, chi);
        let pre = 2.0 * s.bare.lambda * 4.0 * PI / (2.0 * PI).powi(3);
        let kappa = s.kappa();
        let prop = |k: f64| (k * k + chi * chi) / s.mass;
        let q = |f: &dyn Fn(f64) -> f64, scale: f64| pre * quadrature(f, 0.0, s.cutoff, 1e-14 * scale).unwrap();
        let i1 = q(&|k| k * k * (1.0 + k * k / kappa) / prop(k), ii.i1 / pre);
        let i2 = q(&|k| k.powi(4) * (1.0 + k * k / kappa) / prop(k), ii.i2 / pre);
        let i3 = q(&|k| k * k / kappa / prop(k), ii.i3 / pre);
        let i4 = q(&|k| k.powi(4) / kappa / prop(k), ii.i4 / pre);
        for (a, b) in [(ii.i1, i1), (ii.i2, i2), (ii.i3, i3), (ii.i4, i4)] {
            assert!(((a - b) / b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn determinant_brackets_the_g2_root() {
        let s = scheme(2.0);
        let a = isoscalar_determinant(&s, s.cutoff / 3.0);
        let b = isoscalar_determinant(&s, s.cutoff / 5.0);
        assert!(a.signum() != b.signum());
    }

    #[test]
    fn triple_equivalence() {
        for g in [1.5, 2.0, 3.0, 5.0, 8.0, 10.0] {
            let s = scheme(g);
            let r = solve_isoscalar(&s).unwrap();
            assert!(r.exists);
            let d = &r.diagnostics;
            assert!(d.determinant.unwrap().abs() < 1e-9, "G={g}");
            assert!(d.chi_equation.unwrap() < 1e-6, "G={g}: {:?}", d.chi_equation);
            assert!(d.transcendental.unwrap() < 1e-6, "G={g}: {:?}", d.transcendental);
            let zt = solve_transcendental(g, C1Variant::Corrected).unwrap();
            assert!(((zt - r.z) / r.z).abs() < 1e-8);
            assert!((r.chi * r.chi - s.mass * (2.0 * s.rest_energy() - r.mu0)).abs() < 1e-12 * r.chi * r.chi);
        }
    }

    #[test]
    fn known_roots() {
        let z10 = solve_isoscalar(&scheme(10.0)).unwrap().z;
        assert!((z10 - 1.445).abs() < 1e-3);
        let z5 = solve_isoscalar(&scheme(5.0)).unwrap().z;
        assert!(((z5 - 1.85) / 1.85).abs() < 0.01);
        assert!(!solve_isoscalar(&scheme(1.0)).unwrap().exists);
        let near = solve_isoscalar(&scheme(1.2)).unwrap().z;
        let c = c1(1.2, C1Variant::Corrected);
        assert!(((near - PI * c / (2.0 * (c - 1.0))) / near).abs() < 0.02);
    }

    #[test]
    fn threshold_sits_between_rows() {
        let t = existence_threshold(C1Variant::Corrected).unwrap();
        assert!(t > 10.0 / 9.0 && t > 1.1 && t < 1.2, "{t}");
        assert!((c1(t, C1Variant::Corrected) - 1.0).abs() < 1e-14);
        assert!(existence_threshold(C1Variant::Printed).is_none());
    }

    #[test]
    fn printed_c1_has_no_roots() {
        for g in [1.2, 2.0, 10.0, 1e6] {
            assert!(c1(g, C1Variant::Printed) < 0.9 + 1e-12);
            assert!(solve_transcendental(g, C1Variant::Printed).is_none());
        }
        let rows = table1(&[2.0], C1Variant::Printed).unwrap();
        assert_eq!(rows[0].z, None);
    }

    #[test]
    fn isovector_examples() {
        let expect = 4.0 / (1.0 + 3f64.sqrt()).powi(2) / 3.0;
        assert!((isovector_rhs(2.0, 0.0) - expect).abs() < 1e-15);
        assert!((expect - 0.1786).abs() < 1e-4);
        let far = isovector_rhs(1e6, 0.0);
        assert!(far < 2.0 / 3.0 && far > 2.0 / 3.0 - 2e-3);
        assert!(isovector_rhs(3.0, 1.0) < isovector_rhs(3.0, 0.0));
        let r = solve_isovector(&scheme(5.0));
        assert!(!r.exists && r.diagnostics.sup_rhs.unwrap() < 2.0 / 3.0);
    }

    #[test]
    fn wavefunction_reproduces_itself() {
        let s = scheme(5.0);
        let r = solve_isoscalar(&s).unwrap();
        let wf = wavefunction(&s, &r).unwrap();
        assert!(wf.self_consistency < 1e-6, "{}", wf.self_consistency);
        assert!(wf.coeff_b.is_finite());
        assert!(wf.norm_squared > 0.0);
        assert!(matches!(wavefunction(&s, &solve_isovector(&s)), Err(BoundStateError::Missing)));
    }

    #[test]
    fn discrete_root_agrees_with_relative_matrix() {
        let momenta: Vec<Vec<f64>> = [-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|&k| vec![k]).collect();
        let propagator: Vec<f64> = momenta.iter().map(|k| 2.0 + k[0] * k[0]).collect();
        let p = DiscretePair { momenta, propagator, coupling: 0.8, kappa: 4.0, density_sign: 1.0 };
        let root = p.lowest_root().unwrap();
        let spec = p.relative_spectrum();
        assert!((root - spec[0]).abs() < 1e-11, "{root} vs {}", spec[0]);
        assert!(p.determinant(root).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn z_decreasing_and_above_asymptote(g in 1.25f64..200.0, step in 0.05f64..5.0) {
            let z1 = solve_isoscalar(&scheme(g)).unwrap().z;
            let z2 = solve_isoscalar(&scheme(g + step)).unwrap().z;
            prop_assert!(z2 < z1);
            prop_assert!(z2 > (5.0f64 / 6.0).sqrt());
        }

        #[test]
        fn isovector_rhs_below_two_thirds(lg in -3.0f64..6.0, r in 0.0f64..10.0) {
            prop_assert!(isovector_rhs(10f64.powf(lg), r) < 2.0 / 3.0);
        }
    }
}
