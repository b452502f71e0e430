//! The Hamiltonian built by substituting the discretized field into
//! H = Σ ε φ†φ − (λ/Ω) Σ_Q [ρ(Q)ρ(−Q) − j(Q)·j(−Q)].

use std::collections::BTreeMap;

use super::amplitudes::AmplitudeProfile;
use super::modes::{FockSpace, ModeSet, Species};
use super::sparse::{SparseMatrix, C64};
use crate::model::{BareParams, DispersionParams};

/// φ^a_α(q) = f^a(q) A_α(q) + g^a(−q) Ã†_α(−q), stored at ((a·2 + α)·n + q).
#[derive(Debug, Clone)]
pub struct FieldOps {
    pub n_modes: usize,
    pub phi: Vec<SparseMatrix>,
}

impl FieldOps {
    pub fn get(&self, a: usize, iso: usize, q: usize) -> &SparseMatrix {
        &self.phi[(a * 2 + iso) * self.n_modes + q]
    }

    /// `annihilators[iso·n + k]` for A and `tilde[iso·n + k]` for Ã.
    pub fn from_ladders(
        modes: &ModeSet,
        annihilators: &[SparseMatrix],
        tilde: &[SparseMatrix],
        profile: &AmplitudeProfile,
    ) -> Self {
        let n = modes.len();
        let mut phi = Vec::with_capacity(4 * n);
        for a in 0..2 {
            for iso in 0..2 {
                for q in 0..n {
                    let f = profile.at(q).f[a];
                    let g = profile.at(modes.neg(q)).g[a];
                    let at_dag = tilde[iso * n + modes.neg(q)].adjoint();
                    phi.push(annihilators[iso * n + q].scale(f).add_scaled(&at_dag, g));
                }
            }
        }
        Self { n_modes: n, phi }
    }

    pub fn from_space(space: &FockSpace, profile: &AmplitudeProfile) -> Self {
        let n = space.n_modes();
        let grab = |s| (0..2).flat_map(|iso| (0..n).map(move |k| (iso, k))).map(|(iso, k)| space.annihilator(s, iso, k).clone()).collect::<Vec<_>>();
        Self::from_ladders(&space.modes, &grab(Species::A), &grab(Species::Atilde), profile)
    }
}

#[derive(Debug, Clone)]
pub struct HamiltonianParts {
    pub total: SparseMatrix,
    /// block-diagonal in the total number N_A + N_Ã
    pub normal: SparseMatrix,
    /// the remainder
    pub fluctuation: SparseMatrix,
}

pub fn hamiltonian_from_field(modes: &ModeSet, bare: &BareParams, field: &FieldOps) -> SparseMatrix {
    let n = modes.len();
    let dim = field.phi[0].dim();
    let c2 = bare.c * bare.c;
    let eps = |q: usize| modes.k2(q) / (2.0 * bare.m) + bare.m * c2;
    let phi_dag: Vec<SparseMatrix> = field.phi.iter().map(SparseMatrix::adjoint).collect();
    let idx = |a: usize, iso: usize, q: usize| (a * 2 + iso) * n + q;
    let bilinear = |q1: usize, q2: usize| {
        let mut b = SparseMatrix::zeros(dim);
        for a in 0..2 {
            for iso in 0..2 {
                b = b.add(&phi_dag[idx(a, iso, q1)].mul(&field.phi[idx(a, iso, q2)]));
            }
        }
        b
    };
    let bil: Vec<Vec<SparseMatrix>> = (0..n).map(|q1| (0..n).map(|q2| bilinear(q1, q2)).collect()).collect();

    let mut h = SparseMatrix::zeros(dim);
    for (q, row) in bil.iter().enumerate() {
        h = h.add_scaled(&row[q], C64::new(eps(q), 0.0));
    }

    let d = modes.dimension();
    let mut transfers: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
    for q1 in 0..n {
        for q2 in 0..n {
            let tq: Vec<i64> = modes.lattice(q2).iter().zip(modes.lattice(q1)).map(|(a, b)| a - b).collect();
            transfers.entry(tq).or_default().push((q1, q2));
        }
    }
    let density = |pairs: &[(usize, usize)]| {
        pairs.iter().fold(SparseMatrix::zeros(dim), |acc, &(q1, q2)| acc.add(&bil[q1][q2]))
    };
    let current = |pairs: &[(usize, usize)], x: usize| {
        pairs.iter().fold(SparseMatrix::zeros(dim), |acc, &(q1, q2)| {
            let w = (modes.momentum(q1)[x] + modes.momentum(q2)[x]) / (2.0 * bare.m * bare.c);
            acc.add_scaled(&bil[q1][q2], C64::new(w, 0.0))
        })
    };
    let coupling = bare.lambda / modes.omega_volume;
    for (tq, pairs) in &transfers {
        let neg: Vec<i64> = tq.iter().map(|x| -x).collect();
        let back = &transfers[&neg];
        let mut term = density(pairs).mul(&density(back));
        for x in 0..d {
            term = term.sub(&current(pairs, x).mul(&current(back, x)));
        }
        h = h.add_scaled(&term, C64::new(-coupling, 0.0));
    }
    h
}

pub fn split_by_number(h: &SparseMatrix) -> (SparseMatrix, SparseMatrix) {
    h.split_by(|b| i64::from((b as u64).count_ones()))
}

pub fn build_hamiltonian(space: &FockSpace, bare: &BareParams, profile: &AmplitudeProfile) -> HamiltonianParts {
    let field = FieldOps::from_space(space, profile);
    let total = hamiltonian_from_field(&space.modes, bare, &field);
    let (normal, fluctuation) = split_by_number(&total);
    HamiltonianParts { total, normal, fluctuation }
}

/// One-particle energy parameters of the finite mode set: g = λn/Ω and
/// ⟨k²⟩ the mode average.
pub fn discrete_dispersion(modes: &ModeSet, bare: &BareParams) -> DispersionParams {
    DispersionParams {
        m: bare.m,
        c: bare.c,
        g: bare.lambda * modes.len() as f64 / modes.omega_volume,
        k2_avg: modes.mean_k2(),
    }
}

/// The compact normal-ordered form: one-particle energies, a quartic term
/// with weight (λ/Ω)[1 − (k₁+k₂)·(k₃+k₄)/4m²c²] and the vacuum constant.
/// In the mixed term the hole pair enters as Ã†(−k₄)Ã(−k₃), the order
/// normal ordering of Ã(−k₃)Ã†(−k₄) leaves behind.
pub fn compact_hamiltonian(space: &FockSpace, bare: &BareParams, vacuum_energy: f64) -> SparseMatrix {
    let modes = &space.modes;
    let n = modes.len();
    let disp = discrete_dispersion(modes, bare);
    let kappa = bare.kappa();
    let mut h = space.identity().scale(C64::new(vacuum_energy, 0.0));
    for iso in 0..2 {
        for k in 0..n {
            let k2 = modes.k2(k);
            for (s, e) in [(Species::A, disp.e_a(k2)), (Species::Atilde, disp.e_atilde(k2))] {
                h = h.add_scaled(&space.creator(s, iso, k).mul(space.annihilator(s, iso, k)), C64::new(e, 0.0));
            }
        }
    }
    let coupling = bare.lambda / modes.omega_volume;
    let lat = |i: usize| modes.lattice(i).to_vec();
    for k1 in 0..n {
        for k2 in 0..n {
            for k3 in 0..n {
                for k4 in 0..n {
                    let conserved = (0..modes.dimension())
                        .all(|x| lat(k1)[x] - lat(k2)[x] + lat(k3)[x] - lat(k4)[x] == 0);
                    if !conserved {
                        continue;
                    }
                    let p12: Vec<f64> = modes.momentum(k1).iter().zip(modes.momentum(k2)).map(|(a, b)| a + b).collect();
                    let p34: Vec<f64> = modes.momentum(k3).iter().zip(modes.momentum(k4)).map(|(a, b)| a + b).collect();
                    let w = coupling * (1.0 - p12.iter().zip(&p34).map(|(a, b)| a * b).sum::<f64>() / kappa);
                    for a in 0..2 {
                        for b in 0..2 {
                            let quartic = |s1: Species, s2: Species, q3: usize, q4: usize| {
                                space
                                    .creator(s1, a, k1)
                                    .mul(space.creator(s2, b, q3))
                                    .mul(space.annihilator(s1, a, k2))
                                    .mul(space.annihilator(s2, b, q4))
                            };
                            let aa = quartic(Species::A, Species::A, k3, k4);
                            let tt = quartic(Species::Atilde, Species::Atilde, k3, k4);
                            let mixed = quartic(Species::A, Species::Atilde, modes.neg(k4), modes.neg(k3));
                            let term = aa.add(&tt).add_scaled(&mixed, C64::new(-2.0, 0.0));
                            h = h.add_scaled(&term, C64::new(w, 0.0));
                        }
                    }
                }
            }
        }
    }
    h
}
