//! Amplitude pairs (f, g) weighting A and Ã† in the field.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::sparse::{C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    pub f: [C64; 2],
    pub g: [C64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResiduals {
    /// ‖ff† + gg† − 1‖
    pub decomposition: f64,
    /// |Σ f^b ḡ^b|
    pub orthogonality: f64,
    pub norm_f: f64,
    pub norm_g: f64,
}

impl ConstraintResiduals {
    pub fn max(&self) -> f64 {
        self.decomposition.max(self.orthogonality).max(self.norm_f).max(self.norm_g)
    }
}

fn expi(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

/// f = e^{iφ}(e^{iψ}cosθ, −e^{−iψ}sinθ), g = e^{−iφ}(−e^{iψ}sinθ, −e^{−iψ}cosθ).
/// With a plus sign on the first component of g the pair would fail the
/// orthogonality constraint for every θ ∉ {0, π/2}.
pub fn amplitudes_from_angles(theta: f64, psi: f64, phi: f64) -> AmplitudePair {
    let (s, c) = theta.sin_cos();
    AmplitudePair {
        f: [expi(phi + psi) * c, -expi(phi - psi) * s],
        g: [-expi(-phi + psi) * s, -expi(-phi - psi) * c],
    }
}

impl AmplitudePair {
    pub fn standard() -> Self {
        amplitudes_from_angles(0.0, 0.0, 0.0)
    }

    pub fn constraint_residuals(&self) -> ConstraintResiduals {
        let mut dec = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                let v = self.f[a] * self.f[b].conj() + self.g[a] * self.g[b].conj() - if a == b { ONE } else { ZERO };
                dec += v.norm_sqr();
            }
        }
        let n = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs();
        ConstraintResiduals {
            decomposition: dec.sqrt(),
            orthogonality: (self.f[0] * self.g[0].conj() + self.f[1] * self.g[1].conj()).norm(),
            norm_f: n(&self.f),
            norm_g: n(&self.g),
        }
    }

    /// Doublet rotation matrix e^{iγσ₃/2}e^{iβσ₂/2}e^{iασ₁/2} acting on
    /// (A, ie^{iω}Ã†(−k)) under U = e^{iγQ₃}e^{iβQ₂}e^{iαQ₁}.
    pub fn doublet_rotation(alpha: f64, beta: f64, gamma: f64) -> Matrix2<C64> {
        let (sa, ca) = (0.5 * alpha).sin_cos();
        let (sb, cb) = (0.5 * beta).sin_cos();
        let r1 = Matrix2::new(C64::new(ca, 0.0), I * sa, I * sa, C64::new(ca, 0.0));
        let r2 = Matrix2::new(C64::new(cb, 0.0), C64::new(sb, 0.0), C64::new(-sb, 0.0), C64::new(cb, 0.0));
        let r3 = Matrix2::new(expi(0.5 * gamma), ZERO, ZERO, expi(-0.5 * gamma));
        r3 * r2 * r1
    }

    /// (N, M) such that f·A + g·Ã† = N·a + M·ã† with a = U†AU, ã = U†ÃU.
    pub fn rotate(&self, alpha: f64, beta: f64, gamma: f64, omega: f64) -> AmplitudePair {
        let r = Self::doublet_rotation(alpha, beta, gamma);
        let rinv_t = r.try_inverse().expect("rotation is unitary").transpose();
        let to_doublet = -I * expi(-omega);
        let mut out = AmplitudePair { f: [ZERO; 2], g: [ZERO; 2] };
        for a in 0..2 {
            let v = nalgebra::Vector2::new(self.f[a], to_doublet * self.g[a]);
            let w = rinv_t * v;
            out.f[a] = w[0];
            out.g[a] = w[1] / to_doublet;
        }
        out
    }

    /// The closed-form (N, M) quoted with full angles α, β, γ.
    pub fn rotate_quoted(&self, alpha: f64, beta: f64, gamma: f64, omega: f64) -> AmplitudePair {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        let p = expi(-gamma) * C64::new(ca * cb, sa * sb);
        let q = expi(-(omega - gamma)) * C64::new(sa * cb, ca * sb);
        let r = expi(gamma) * C64::new(ca * cb, -sa * sb);
        let s = expi(omega - gamma) * C64::new(sa * cb, -ca * sb);
        let mut out = AmplitudePair { f: [ZERO; 2], g: [ZERO; 2] };
        for a in 0..2 {
            out.f[a] = p * self.f[a] - q * self.g[a];
            out.g[a] = r * self.g[a] + s * self.f[a];
        }
        out
    }
}

/// Amplitudes per momentum index; constant profiles repeat one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AmplitudeProfile {
    Constant(AmplitudePair),
    PerMode(Vec<AmplitudePair>),
}

impl AmplitudeProfile {
    pub fn at(&self, k: usize) -> AmplitudePair {
        match self {
            AmplitudeProfile::Constant(p) => *p,
            AmplitudeProfile::PerMode(v) => v[k],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_angles() {
        let p = AmplitudePair::standard();
        assert_eq!(p.f, [ONE, ZERO]);
        assert_eq!(p.g, [ZERO, -ONE]);
    }

    #[test]
    fn quoted_sign_breaks_orthogonality() {
        let (s, c) = 0.4f64.sin_cos();
        let bad = AmplitudePair { f: [C64::new(c, 0.0), C64::new(-s, 0.0)], g: [C64::new(s, 0.0), C64::new(-c, 0.0)] };
        assert!(bad.constraint_residuals().orthogonality > 0.5);
    }

    #[test]
    fn identity_rotation() {
        let p = amplitudes_from_angles(0.3, 0.2, 0.1);
        let r = p.rotate(0.0, 0.0, 0.0, 0.4);
        for a in 0..2 {
            assert!((r.f[a] - p.f[a]).norm() < 1e-15 && (r.g[a] - p.g[a]).norm() < 1e-15);
        }
        let q = p.rotate_quoted(0.0, 0.0, 0.0, 0.4);
        for a in 0..2 {
            assert!((q.f[a] - p.f[a]).norm() < 1e-15 && (q.g[a] - p.g[a]).norm() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn constraints_hold(t in -4.0f64..4.0, s in -4.0f64..4.0, f in -4.0f64..4.0,
                            a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0, w in -4.0f64..4.0) {
            let p = amplitudes_from_angles(t, s, f);
            prop_assert!(p.constraint_residuals().max() < 1e-15);
            prop_assert!(p.rotate(a, b, c, w).constraint_residuals().max() < 1e-14);
            prop_assert!(p.rotate_quoted(a, b, c, w).constraint_residuals().max() < 1e-14);
        }
    }
}
