//! Parameter schemes, renormalization, one-particle spectra, vacuum energy
//! and the phase structure of the model.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::numerics::{find_root, RootBracket};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("renormalization did not converge in {} iterations", trace.len())]
    NoConvergence { trace: Vec<RenormalizationStep> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BareParams {
    pub m: f64,
    pub c: f64,
    pub lambda: f64,
}

impl BareParams {
    pub fn new(m: f64, c: f64, lambda: f64) -> Result<Self, ModelError> {
        let p = Self { m, c, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(ModelError::InvalidParams(format!("bare mass must be positive (got {})", self.m)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ModelError::InvalidParams(format!("c must be positive (got {})", self.c)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(ModelError::InvalidParams(format!("lambda must be non-negative (got {})", self.lambda)));
        }
        Ok(())
    }

    /// 4m²c², the scale of the current-current term.
    pub fn kappa(&self) -> f64 {
        4.0 * self.m * self.m * self.c * self.c
    }

    /// Expansion parameter of the weak-coupling series.
    pub fn alpha0(&self) -> f64 {
        (10.0f64 / 3.0).powf(1.5) * self.lambda * self.m * self.m * self.c / (12.0 * PI * PI)
    }
}

/// Self-consistent parameter bundle with ΔE = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelScheme {
    pub bare: BareParams,
    /// renormalized mass M
    pub mass: f64,
    /// renormalized coupling g (energy)
    pub g: f64,
    /// G = 2g/(Mc²)
    pub coupling: f64,
    /// cutoff momentum Λ
    pub cutoff: f64,
    /// ⟨k²⟩
    pub k2_avg: f64,
    /// 1/V* = Λ³/(6π²)
    pub inv_vstar: f64,
}

impl ModelScheme {
    pub fn c(&self) -> f64 {
        self.bare.c
    }

    pub fn kappa(&self) -> f64 {
        self.bare.kappa()
    }

    /// √(1+G)
    pub fn root(&self) -> f64 {
        (1.0 + self.coupling).sqrt()
    }

    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c() * self.c()
    }

    pub fn dispersion(&self) -> DispersionParams {
        DispersionParams { m: self.bare.m, c: self.bare.c, g: self.g, k2_avg: self.k2_avg }
    }

    /// Largest relative violation of the defining relations.
    pub fn consistency_residual(&self) -> f64 {
        let c2 = self.c() * self.c();
        let s = self.root();
        let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
        [
            rel(self.cutoff * self.cutoff, 5.0 * self.k2_avg / 3.0),
            rel(self.bare.lambda * self.cutoff.powi(3), 6.0 * PI * PI * self.g),
            rel(self.inv_vstar, self.cutoff.powi(3) / (6.0 * PI * PI)),
            rel(self.k2_avg, self.mass * self.mass * c2 * (1.0 + self.coupling + s)),
            rel(self.bare.m, 0.5 * self.mass * (1.0 + s)),
            rel(self.coupling * self.mass * c2, 2.0 * self.g),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Scheme from the physical parameters (M, G, c).
pub fn scheme_from_physical(mass: f64, coupling: f64, c: f64) -> Result<ModelScheme, ModelError> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(ModelError::InvalidParams(format!("M must be positive (got {mass})")));
    }
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return Err(ModelError::InvalidParams(format!("G must be non-negative (got {coupling})")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(ModelError::InvalidParams(format!("c must be positive (got {c})")));
    }
    let c2 = c * c;
    let s = (1.0 + coupling).sqrt();
    let g = 0.5 * coupling * mass * c2;
    let m = 0.5 * mass * (1.0 + s);
    let k2_avg = mass * mass * c2 * (1.0 + coupling + s);
    let cutoff = (5.0 * k2_avg / 3.0).sqrt();
    let inv_vstar = cutoff.powi(3) / (6.0 * PI * PI);
    let lambda = g / inv_vstar;
    Ok(ModelScheme {
        bare: BareParams { m, c, lambda },
        mass,
        g,
        coupling,
        cutoff,
        k2_avg,
        inv_vstar,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormalizationStep {
    pub mass: f64,
    pub k2_avg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizeOptions {
    /// weight of the new iterate, in (0, 1]
    pub damping: f64,
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for RenormalizeOptions {
    fn default() -> Self {
        Self { damping: 1.0, rel_tol: 1e-13, max_iterations: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Renormalized {
    pub scheme: ModelScheme,
    pub trace: Vec<RenormalizationStep>,
}

/// Fixed point of the cutoff, ΔE = 0 and mass relations for given (m, λ).
pub fn renormalize(bare: &BareParams) -> Result<ModelScheme, ModelError> {
    renormalize_with(bare, &RenormalizeOptions::default()).map(|r| r.scheme)
}

pub fn renormalize_with(bare: &BareParams, opts: &RenormalizeOptions) -> Result<Renormalized, ModelError> {
    bare.validate()?;
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(ModelError::InvalidParams(format!("damping must lie in (0, 1] (got {})", opts.damping)));
    }
    let (m, c, lambda) = (bare.m, bare.c, bare.lambda);
    let c2 = c * c;
    let mut mass = m;
    let mut k2 = 2.0 * m * m * c2;
    let mut trace = vec![RenormalizationStep { mass, k2_avg: k2 }];
    for _ in 0..opts.max_iterations {
        let cutoff = (5.0 * k2 / 3.0).sqrt();
        let g = lambda * cutoff.powi(3) / (6.0 * PI * PI);
        let mass_new = m / (1.0 + g / (2.0 * m * c2));
        let coupling = 2.0 * g / (mass_new * c2);
        let k2_new = mass_new * mass_new * c2 * (1.0 + coupling + (1.0 + coupling).sqrt());
        let next_mass = mass + opts.damping * (mass_new - mass);
        let next_k2 = k2 + opts.damping * (k2_new - k2);
        let done = ((next_mass - mass) / mass).abs() <= opts.rel_tol && ((next_k2 - k2) / k2).abs() <= opts.rel_tol;
        mass = next_mass;
        k2 = next_k2;
        trace.push(RenormalizationStep { mass, k2_avg: k2 });
        if done {
            let cutoff = (5.0 * k2 / 3.0).sqrt();
            let inv_vstar = cutoff.powi(3) / (6.0 * PI * PI);
            let g = lambda * inv_vstar;
            let scheme = ModelScheme {
                bare: *bare,
                mass,
                g,
                coupling: 2.0 * g / (mass * c2),
                cutoff,
                k2_avg: k2,
                inv_vstar,
            };
            return Ok(Renormalized { scheme, trace });
        }
    }
    Err(ModelError::NoConvergence { trace })
}

/// Excitation branches; B stands for the degenerate pair B, B̃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumBranch {
    A,
    Atilde,
    B,
}

impl SpectrumBranch {
    pub const ALL: [SpectrumBranch; 3] = [SpectrumBranch::A, SpectrumBranch::Atilde, SpectrumBranch::B];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumBranch::A => "A",
            SpectrumBranch::Atilde => "Atilde",
            SpectrumBranch::B => "B",
        }
    }
}

/// One-particle energies with free (m, c, g, ⟨k²⟩); no self-consistency
/// assumed. Used both by the continuum scheme and the finite-mode oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    pub m: f64,
    pub c: f64,
    pub g: f64,
    pub k2_avg: f64,
}

impl DispersionParams {
    fn kappa(&self) -> f64 {
        4.0 * self.m * self.m * self.c * self.c
    }

    pub fn free(&self, k2: f64) -> f64 {
        k2 / (2.0 * self.m) + self.m * self.c * self.c
    }

    pub fn e_a(&self, k2: f64) -> f64 {
        self.free(k2) + self.g * (k2 + self.k2_avg) / self.kappa() - 5.0 * self.g
    }

    pub fn e_atilde(&self, k2: f64) -> f64 {
        -self.free(k2) + self.g * (k2 + self.k2_avg) / self.kappa() + 3.0 * self.g
    }

    pub fn e_b(&self, k2: f64) -> f64 {
        self.free(k2) + self.g * (k2 + self.k2_avg) / self.kappa() - self.g
    }

    pub fn energy(&self, branch: SpectrumBranch, k2: f64) -> f64 {
        match branch {
            SpectrumBranch::A => self.e_a(k2),
            SpectrumBranch::Atilde => self.e_atilde(k2),
            SpectrumBranch::B => self.e_b(k2),
        }
    }

    /// E(k) = coeff·k² + gap
    pub fn affine(&self, branch: SpectrumBranch) -> Affine {
        Affine { k2_coeff: self.energy(branch, 1.0) - self.energy(branch, 0.0), gap: self.energy(branch, 0.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub k2_coeff: f64,
    pub gap: f64,
}

impl Affine {
    pub fn at(&self, k2: f64) -> f64 {
        self.k2_coeff * k2 + self.gap
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub energy: f64,
    pub gap: f64,
    /// effective mass; infinite at the piercing point, negative for a bubble
    pub mass: f64,
    pub infinite_mass: bool,
}

const PIERCING_TOL: f64 = 1e-12;

/// Dispersion of the branch over the self-consistent scheme.
pub fn dispersion(branch: SpectrumBranch, scheme: &ModelScheme) -> Affine {
    let c2 = scheme.c() * scheme.c();
    let (m, g) = (scheme.bare.m, scheme.g);
    let kappa = scheme.kappa();
    match branch {
        SpectrumBranch::A => Affine {
            k2_coeff: 1.0 / (2.0 * m) + g / kappa,
            gap: m * c2 - 5.0 * g + g * scheme.k2_avg / kappa,
        },
        SpectrumBranch::Atilde => Affine {
            k2_coeff: -1.0 / (2.0 * m) + g / kappa,
            gap: -m * c2 + 3.0 * g + g * scheme.k2_avg / kappa,
        },
        SpectrumBranch::B => Affine { k2_coeff: 1.0 / (2.0 * scheme.mass), gap: scheme.rest_energy() },
    }
}

pub fn spectrum(branch: SpectrumBranch, k: f64, scheme: &ModelScheme) -> SpectrumPoint {
    let aff = dispersion(branch, scheme);
    let x = scheme.g / (2.0 * scheme.bare.m * scheme.c() * scheme.c());
    let infinite_mass = branch == SpectrumBranch::Atilde && (x - 1.0).abs() <= PIERCING_TOL;
    let (k2_coeff, mass) = if infinite_mass { (0.0, f64::INFINITY) } else { (aff.k2_coeff, 0.5 / aff.k2_coeff) };
    SpectrumPoint { energy: k2_coeff * k * k + aff.gap, gap: aff.gap, mass, infinite_mass }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Hole,
    Bubble,
    Piercing,
    Particle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassGapReport {
    pub m_a: f64,
    pub m_atilde: f64,
    pub e_a0: f64,
    pub e_atilde0: f64,
    pub alpha: f64,
    pub regime: Regime,
    /// E_A(0) + E_Ã(0)
    pub gap_sum: f64,
    /// −2g + g⟨k²⟩/(2m²c²), what the branch formulas add up to
    pub gap_sum_identity: f64,
    /// +2g + g⟨k²⟩/(2m²c²), the form quoted alongside the mass relations;
    /// it differs from the gap sum by exactly 4g
    pub gap_sum_quoted: f64,
    /// |m from m_A − m from m_Ã| / m, when m_Ã is a real particle mass
    pub bare_mass_mismatch: Option<f64>,
}

pub fn regime_of(scheme: &ModelScheme) -> Regime {
    let x = scheme.g / (2.0 * scheme.bare.m * scheme.c() * scheme.c());
    if scheme.g <= 0.0 {
        Regime::Hole
    } else if (x - 1.0).abs() <= PIERCING_TOL {
        Regime::Piercing
    } else if x < 1.0 {
        Regime::Bubble
    } else {
        Regime::Particle
    }
}

pub fn masses_and_gaps(scheme: &ModelScheme) -> MassGapReport {
    let c2 = scheme.c() * scheme.c();
    let m = scheme.bare.m;
    let g = scheme.g;
    let x = g / (2.0 * m * c2);
    let regime = regime_of(scheme);
    let m_a = m / (1.0 + x);
    let m_atilde = if regime == Regime::Piercing { f64::INFINITY } else { m / (x - 1.0) };
    let a = dispersion(SpectrumBranch::A, scheme).gap;
    let at = dispersion(SpectrumBranch::Atilde, scheme).gap;
    let k2_term = g * scheme.k2_avg / (2.0 * m * m * c2);
    let bare_mass_mismatch = if regime == Regime::Particle {
        let from_a = 0.5 * m_a * (1.0 + (1.0 + 2.0 * g / (m_a * c2)).sqrt());
        let from_at = 0.5 * m_atilde * ((1.0 + 2.0 * g / (m_atilde * c2)).sqrt() - 1.0);
        Some(((from_a - from_at) / m).abs())
    } else {
        None
    };
    MassGapReport {
        m_a,
        m_atilde,
        e_a0: a,
        e_atilde0: at,
        alpha: (1.0 + 2.0 * g / (m_a * c2)).sqrt() - 3.0,
        regime,
        gap_sum: a + at,
        gap_sum_identity: -2.0 * g + k2_term,
        gap_sum_quoted: 2.0 * g + k2_term,
        bare_mass_mismatch,
    }
}

/// (V*/V)·W₀ = ⟨k²⟩/m + 2mc² − 4g for the broken-phase vacuum.
pub fn vacuum_energy_density(scheme: &ModelScheme) -> f64 {
    let c2 = scheme.c() * scheme.c();
    scheme.k2_avg / scheme.bare.m + 2.0 * scheme.bare.m * c2 - 4.0 * scheme.g
}

/// The same quantity written through (M, G): Mc²[3√(1+G) + 1 − 2G].
pub fn vacuum_energy_density_physical(mass: f64, coupling: f64, c: f64) -> f64 {
    mass * c * c * (3.0 * (1.0 + coupling).sqrt() + 1.0 - 2.0 * coupling)
}

/// Positive root of G² − (13/4)G − 2 = 0, where the vacuum energy changes sign.
pub fn critical_coupling() -> f64 {
    (13.0 + 297f64.sqrt()) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    SymmetricPreferred,
    BrokenPreferred,
    Critical,
}

pub fn classify_phase(coupling: f64) -> Phase {
    let w = vacuum_energy_density_physical(1.0, coupling, 1.0);
    if w.abs() <= 1e-9 {
        Phase::Critical
    } else if w > 0.0 {
        Phase::SymmetricPreferred
    } else {
        Phase::BrokenPreferred
    }
}

/// Coefficients of g/(2mc²α₀) and Λ/(√(10/3)mc) as power series in α₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub alpha0: Vec<f64>,
    /// [1, a1, a2, a3] for the coupling
    pub coupling_coeffs: Vec<f64>,
    /// [1, b1, b2, b3] for the cutoff
    pub cutoff_coeffs: Vec<f64>,
    pub coupling_quoted: Vec<f64>,
    pub cutoff_quoted: Vec<f64>,
    /// largest |ratio − 1| / α₀ over the sampled points, a bound on the slope
    pub coupling_slope_bound: f64,
    pub cutoff_slope_bound: f64,
}

pub const COUPLING_SERIES_QUOTED: [f64; 3] = [1.0, 9.0, 97.5];
pub const CUTOFF_SERIES_QUOTED: [f64; 3] = [1.0, 3.0, 23.5];

/// The two ratios at a given α₀ (m = c = 1).
pub fn series_ratios(alpha0: f64) -> Result<(f64, f64), ModelError> {
    let lambda = alpha0 * 12.0 * PI * PI / (10.0f64 / 3.0).powf(1.5);
    let bare = BareParams::new(1.0, 1.0, lambda)?;
    let s = renormalize(&bare)?;
    Ok((s.g / (2.0 * alpha0), s.cutoff / (10.0f64 / 3.0).sqrt()))
}

/// Least-squares cubic fit of (ratio − 1)/α₀ on a geometric α₀ grid.
pub fn measure_series(alpha_lo: f64, alpha_hi: f64, points: usize) -> Result<SeriesFit, ModelError> {
    if !(alpha_lo > 0.0 && alpha_hi > alpha_lo && points >= 4) {
        return Err(ModelError::InvalidParams("need 0 < lo < hi and at least 4 points".into()));
    }
    let alphas = crate::numerics::grid(alpha_lo, alpha_hi, points, true);
    let mut gy = Vec::with_capacity(points);
    let mut ly = Vec::with_capacity(points);
    for &a in &alphas {
        let (rg, rl) = series_ratios(a)?;
        gy.push((rg - 1.0) / a);
        ly.push((rl - 1.0) / a);
    }
    let fit = |y: &[f64]| -> Vec<f64> {
        let x = nalgebra::DMatrix::from_fn(points, 3, |i, j| alphas[i].powi(j as i32));
        let rhs = nalgebra::DVector::from_column_slice(y);
        let sol = x.svd(true, true).solve(&rhs, 1e-14).expect("svd solve");
        let mut out = vec![1.0];
        out.extend(sol.iter());
        out
    };
    let slope = |y: &[f64]| y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(SeriesFit {
        coupling_coeffs: fit(&gy),
        cutoff_coeffs: fit(&ly),
        coupling_quoted: COUPLING_SERIES_QUOTED.to_vec(),
        cutoff_quoted: CUTOFF_SERIES_QUOTED.to_vec(),
        coupling_slope_bound: slope(&gy),
        cutoff_slope_bound: slope(&ly),
        alpha0: alphas,
    })
}

/// The critical coupling located numerically on the vacuum energy.
pub fn critical_coupling_by_root() -> f64 {
    find_root(|g| vacuum_energy_density_physical(1.0, g, 1.0), &RootBracket::new(3.0, 5.0, 1e-14))
        .expect("vacuum energy changes sign on [3, 5]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn free_scheme() {
        let s = scheme_from_physical(1.0, 0.0, 1.0).unwrap();
        assert_eq!(s.bare.m, 1.0);
        assert_eq!(s.g, 0.0);
        assert!((s.k2_avg - 2.0).abs() < 1e-15);
        assert!((s.cutoff - (10.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(masses_and_gaps(&s).regime, Regime::Hole);
        assert_eq!(masses_and_gaps(&s).m_a, 1.0);
        assert!((spectrum(SpectrumBranch::A, 0.0, &s).energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn piercing_point() {
        let s = scheme_from_physical(1.0, 8.0, 1.0).unwrap();
        // m = (M/2)(1 + 3) = 2, g = GMc²/2 = 4
        assert_eq!(s.bare.m, 2.0);
        assert_eq!(s.g, 4.0);
        let r = masses_and_gaps(&s);
        assert_eq!(r.regime, Regime::Piercing);
        assert_eq!(r.alpha, 0.0);
        let p = spectrum(SpectrumBranch::Atilde, 3.0, &s);
        assert!(p.infinite_mass);
        assert_eq!(p.energy, p.gap);
        assert!((vacuum_energy_density(&s) + 6.0).abs() < 1e-13);
    }

    #[test]
    fn alpha_two_gives_triple_mass() {
        let s = scheme_from_physical(1.0, 24.0, 1.0).unwrap();
        let r = masses_and_gaps(&s);
        assert!((r.alpha - 2.0).abs() < 1e-14);
        assert!(rel(r.m_atilde, 3.0 * r.m_a) < 1e-14);
        assert_eq!(r.regime, Regime::Particle);
        assert!(r.bare_mass_mismatch.unwrap() < 1e-14);
    }

    #[test]
    fn gaps_in_physical_units() {
        let s = scheme_from_physical(1.0, 2.0, 1.0).unwrap();
        assert!((spectrum(SpectrumBranch::A, 0.0, &s).energy + 3.0).abs() < 1e-14);
        let r = masses_and_gaps(&s);
        assert!((r.e_atilde0 - (4.0 - 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(spectrum(SpectrumBranch::B, 0.0, &s).energy, 1.0);
    }

    #[test]
    fn gap_sum_quoted_form_is_off_by_4g() {
        let s = scheme_from_physical(1.3, 5.0, 0.7).unwrap();
        let r = masses_and_gaps(&s);
        assert!((r.gap_sum - r.gap_sum_identity).abs() < 1e-13);
        assert!((r.gap_sum_quoted - r.gap_sum - 4.0 * s.g).abs() < 1e-12);
        let c2 = 0.49;
        assert!(rel(r.gap_sum, 1.3 * c2 * (1.0 - 6f64.sqrt())) < 1e-13);
    }

    #[test]
    fn vacuum_and_phases() {
        assert!((vacuum_energy_density(&scheme_from_physical(1.0, 0.0, 1.0).unwrap()) - 4.0).abs() < 1e-14);
        let gcr = critical_coupling();
        assert!((gcr - 3.77921).abs() < 1e-5);
        assert!(((gcr - 3.75) / gcr).abs() < 0.01);
        assert!((critical_coupling_by_root() - gcr).abs() < 1e-12);
        let s = scheme_from_physical(1.0, gcr, 1.0).unwrap();
        assert!(vacuum_energy_density(&s).abs() < 1e-10);
        assert_eq!(classify_phase(0.0), Phase::SymmetricPreferred);
        assert_eq!(classify_phase(8.0), Phase::BrokenPreferred);
        assert_eq!(classify_phase(gcr), Phase::Critical);
    }

    #[test]
    fn renormalize_free_limit() {
        let s = renormalize(&BareParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(s.mass, 1.0);
        assert_eq!(s.g, 0.0);
        assert!((s.cutoff - (10.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn renormalize_reports_trace_on_failure() {
        let opts = RenormalizeOptions { max_iterations: 2, ..Default::default() };
        let err = renormalize_with(&BareParams::new(1.0, 1.0, 5.0).unwrap(), &opts).unwrap_err();
        match err {
            ModelError::NoConvergence { trace } => assert_eq!(trace.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn leading_series_terms() {
        let (rg, rl) = series_ratios(1e-4).unwrap();
        // exact expansions: 1 + 3a/2 + ... and 1 + a/2 + ...
        assert!((rg - 1.0 - 1.5e-4).abs() < 2e-8);
        assert!((rl - 1.0 - 0.5e-4).abs() < 2e-8);
        let fit = measure_series(1e-4, 2e-2, 12).unwrap();
        assert!((fit.coupling_coeffs[1] - 1.5).abs() < 1e-5);
        assert!((fit.coupling_coeffs[2] - 1.125).abs() < 1e-3);
        assert!((fit.cutoff_coeffs[1] - 0.5).abs() < 1e-5);
        assert!((fit.cutoff_coeffs[2] - 0.125).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn scheme_invariants(mass in 0.1f64..10.0, coupling in 0.0f64..100.0, c in 0.2f64..5.0) {
            let s = scheme_from_physical(mass, coupling, c).unwrap();
            prop_assert!(s.consistency_residual() < 1e-13);
            let r = masses_and_gaps(&s);
            prop_assert!(rel(r.m_a, mass) < 1e-13);
            prop_assert!((r.gap_sum - r.gap_sum_identity).abs() <= 1e-12 * (s.g + s.rest_energy()));
            let w = vacuum_energy_density(&s);
            let w1 = vacuum_energy_density_physical(mass, coupling, c);
            prop_assert!((w - w1).abs() <= 1e-12 * (s.g + s.rest_energy()) * 8.0);
            prop_assert_eq!(r.alpha > 1e-12, coupling > 8.0 + 1e-9);
            if r.alpha > 1e-6 {
                prop_assert!(rel(r.m_atilde, (1.0 + 4.0 / r.alpha) * r.m_a) < 1e-10);
            }
            let k = 0.37 * s.cutoff;
            let eb = spectrum(SpectrumBranch::B, k, &s).energy - spectrum(SpectrumBranch::B, 0.0, &s).energy;
            prop_assert!(rel(eb, k * k / (2.0 * mass)) < 1e-14);
            // raw B formula agrees with the ΔE = 0 form
            let d = s.dispersion();
            prop_assert!(rel(d.e_b(k * k), spectrum(SpectrumBranch::B, k, &s).energy) < 1e-12);
        }

        #[test]
        fn renormalize_round_trip(coupling in 0.0f64..100.0) {
            let s = scheme_from_physical(1.0, coupling, 1.0).unwrap();
            let r = renormalize(&s.bare).unwrap();
            prop_assert!(rel(r.mass, s.mass) < 1e-10);
            prop_assert!((r.coupling - s.coupling).abs() <= 1e-10 * s.coupling.max(1.0));
            prop_assert!(rel(r.cutoff, s.cutoff) < 1e-10);
            prop_assert!(rel(r.k2_avg, s.k2_avg) < 1e-10);
        }
    }
}
