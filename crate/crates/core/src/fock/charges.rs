//! SU(2)_Q charges, isospin and the U(1) charge as explicit operators.

use super::modes::{FockSpace, Species};
use super::sparse::{SparseMatrix, C64, I, ONE};

#[derive(Debug, Clone)]
pub struct ChargeSet {
    pub q: [SparseMatrix; 3],
    pub t: [SparseMatrix; 3],
    pub q_u1: SparseMatrix,
    pub omega_phase: f64,
}

fn pauli(i: usize) -> [[C64; 2]; 2] {
    let z = C64::new(0.0, 0.0);
    match i {
        0 => [[z, ONE], [ONE, z]],
        1 => [[z, -I], [I, z]],
        _ => [[ONE, z], [z, -ONE]],
    }
}

/// Isospin with either sign on the Ã Ã† term; `+1` is what the field
/// bilinear ½Ψ†τΨ produces.
pub fn isospin(space: &FockSpace, tilde_sign: f64) -> [SparseMatrix; 3] {
    let n = space.n_modes();
    std::array::from_fn(|i| {
        let tau = pauli(i);
        let mut t = SparseMatrix::zeros(space.dim());
        for k in 0..n {
            for a in 0..2 {
                for b in 0..2 {
                    if tau[a][b].norm() == 0.0 {
                        continue;
                    }
                    let aa = space.creator(Species::A, a, k).mul(space.annihilator(Species::A, b, k));
                    let tt = space.annihilator(Species::Atilde, a, k).mul(space.creator(Species::Atilde, b, k));
                    t = t.add_scaled(&aa, 0.5 * tau[a][b]).add_scaled(&tt, 0.5 * tilde_sign * tau[a][b]);
                }
            }
        }
        t
    })
}

pub fn build_charges(space: &FockSpace, omega_phase: f64) -> ChargeSet {
    let n = space.n_modes();
    let dim = space.dim();
    let e = C64::from_polar(1.0, omega_phase);
    let mut pair_up = SparseMatrix::zeros(dim);
    let mut q3 = SparseMatrix::zeros(dim);
    let mut q_u1 = SparseMatrix::zeros(dim);
    for iso in 0..2 {
        for k in 0..n {
            let mk = space.modes.neg(k);
            pair_up = pair_up.add(&space.creator(Species::A, iso, k).mul(space.creator(Species::Atilde, iso, mk)));
            let na = space.creator(Species::A, iso, k).mul(space.annihilator(Species::A, iso, k));
            let hole = space.annihilator(Species::Atilde, iso, k).mul(space.creator(Species::Atilde, iso, k));
            q3 = q3.add_scaled(&na, C64::new(0.5, 0.0)).add_scaled(&hole, C64::new(-0.5, 0.0));
            q_u1 = q_u1.add(&na).add(&hole);
        }
    }
    // Σ A†(k)Ã†(−k) and its adjoint Σ Ã(−k)A(k)
    let up = pair_up.scale(e);
    let down = up.adjoint();
    let q1 = up.sub(&down).scale(I * 0.5);
    let q2 = up.add(&down).scale(C64::new(0.5, 0.0));
    ChargeSet { q: [q1, q2, q3], t: isospin(space, 1.0), q_u1, omega_phase }
}

impl ChargeSet {
    pub fn raising(&self) -> SparseMatrix {
        self.q[0].add_scaled(&self.q[1], I)
    }

    pub fn lowering(&self) -> SparseMatrix {
        self.q[0].add_scaled(&self.q[1], -I)
    }

    pub fn casimir(&self) -> SparseMatrix {
        self.q[0].mul(&self.q[0]).add(&self.q[1].mul(&self.q[1])).add(&self.q[2].mul(&self.q[2]))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.q
            .iter()
            .chain(self.t.iter())
            .chain(std::iter::once(&self.q_u1))
            .map(SparseMatrix::hermiticity_residual)
            .fold(0.0, f64::max)
    }
}

/// max over i of ‖[X_i, X_j] − iε_ijk X_k‖.
pub fn su2_residual(x: &[SparseMatrix; 3]) -> f64 {
    let mut worst = 0.0f64;
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        worst = worst.max(x[i].commutator(&x[j]).add_scaled(&x[k], -I).norm());
    }
    worst
}

pub fn mutual_commutator_residual(x: &[SparseMatrix], y: &[SparseMatrix]) -> f64 {
    x.iter().flat_map(|a| y.iter().map(move |b| a.commutator(b).norm())).fold(0.0, f64::max)
}
