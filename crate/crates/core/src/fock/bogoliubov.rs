//! Bogoliubov rotation that fills the vacuum with isosinglet Ã Ã pairs.

use super::modes::{FockSpace, Species};
use super::sparse::{SparseMatrix, C64, I};

/// ε_αβ with ε₀₁ = 1.
fn eps(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone)]
pub struct BogoliubovTransform {
    pub omega: f64,
    pub phi: f64,
    /// Hermitian generator G; U = exp(iωG)
    pub generator: SparseMatrix,
    pub unitary: SparseMatrix,
    /// B̃_α(k) = U†Ã_α(k)U at [iso·n + k]
    pub b_tilde: Vec<SparseMatrix>,
    /// ‖U†U − 1‖
    pub unitarity: f64,
    /// worst ‖B̃ − (cos ω Ã − e^{iφ} sin ω ε Ã†(−k))‖
    pub closed_form: f64,
}

/// G = (i/2) Σ_k ε_αβ [e^{iφ} Ã†_α(k) Ã†_β(−k) − e^{−iφ} Ã_β(−k) Ã_α(k)].
pub fn generator(space: &FockSpace, phi: f64) -> SparseMatrix {
    let n = space.n_modes();
    let mut up = SparseMatrix::zeros(space.dim());
    for k in 0..n {
        let mk = space.modes.neg(k);
        for a in 0..2 {
            for b in 0..2 {
                let e = eps(a, b);
                if e == 0.0 {
                    continue;
                }
                let pair = space.creator(Species::Atilde, a, k).mul(space.creator(Species::Atilde, b, mk));
                up = up.add_scaled(&pair, C64::new(e, 0.0));
            }
        }
    }
    let up = up.scale(C64::from_polar(1.0, phi));
    up.sub(&up.adjoint()).scale(I * 0.5)
}

pub fn bogoliubov(space: &FockSpace, omega: f64, phi: f64) -> BogoliubovTransform {
    let n = space.n_modes();
    let gen = generator(space, phi);
    let u = gen.exp_i(omega);
    let ud = u.adjoint();
    let unitarity = ud.mul(&u).sub(&space.identity()).norm();
    let mut b_tilde = Vec::with_capacity(2 * n);
    let mut closed_form = 0.0f64;
    for a in 0..2 {
        for k in 0..n {
            let b = ud.mul(space.annihilator(Species::Atilde, a, k)).mul(&u).pruned(1e-15);
            let mk = space.modes.neg(k);
            let mut expect = space.annihilator(Species::Atilde, a, k).scale(C64::new(omega.cos(), 0.0));
            for bb in 0..2 {
                let e = eps(a, bb);
                if e != 0.0 {
                    let coef = -C64::from_polar(1.0, phi) * omega.sin() * e;
                    expect = expect.add_scaled(space.creator(Species::Atilde, bb, mk), coef);
                }
            }
            closed_form = closed_form.max(b.sub(&expect).norm());
            b_tilde.push(b);
        }
    }
    BogoliubovTransform { omega, phi, generator: gen, unitary: u, b_tilde, unitarity, closed_form }
}

impl BogoliubovTransform {
    /// B-vacuum U†|0⟩.
    pub fn vacuum(&self, space: &FockSpace) -> Vec<C64> {
        self.unitary.adjoint().apply(&space.vacuum())
    }

    /// Worst anticommutator violation among B = A and B̃.
    pub fn car_residual(&self, space: &FockSpace) -> f64 {
        let n = space.n_modes();
        let mut ops: Vec<SparseMatrix> = Vec::with_capacity(4 * n);
        for a in 0..2 {
            for k in 0..n {
                ops.push(space.annihilator(Species::A, a, k).clone());
            }
        }
        ops.extend(self.b_tilde.iter().cloned());
        let eye = space.identity();
        let mut worst = 0.0f64;
        for i in 0..ops.len() {
            for j in 0..ops.len() {
                let mut ac = ops[i].anticommutator(&ops[j].adjoint());
                if i == j {
                    ac = ac.sub(&eye);
                }
                worst = worst.max(ac.norm()).max(ops[i].anticommutator(&ops[j]).norm());
            }
        }
        worst
    }

    /// Part of U H U† that changes the total number; zero means H is
    /// number-conserving in the B operators.
    pub fn fluctuation_norm(&self, h: &SparseMatrix) -> f64 {
        let rotated = self.unitary.mul(h).mul(&self.unitary.adjoint());
        super::hamiltonian::split_by_number(&rotated).1.norm()
    }
}
