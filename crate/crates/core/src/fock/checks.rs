//! Verification reports computed from the explicit operators.

use serde::{Deserialize, Serialize};

use super::amplitudes::{AmplitudePair, AmplitudeProfile};
use super::bogoliubov::bogoliubov;
use super::charges::{build_charges, ChargeSet};
use super::hamiltonian::{build_hamiltonian, discrete_dispersion, hamiltonian_from_field, FieldOps};
use super::modes::{FockSpace, Species};
use super::sparse::{basis_vector, inner, residual, vec_norm, SparseMatrix, C64, ZERO};
use crate::bound_state::DiscretePair;
use crate::model::BareParams;

/// Rayleigh quotient and eigen-residual of `op` on `v`.
pub fn eigen_pair(op: &SparseMatrix, v: &[C64]) -> (f64, f64) {
    let w = op.apply(v);
    let nn = inner(v, v).re;
    let e = inner(v, &w) / nn;
    (e.re, residual(&w, v, e) / nn.sqrt())
}

fn casimir_l(c: f64) -> f64 {
    0.5 * (-1.0 + (1.0 + 4.0 * c).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneParticleRow {
    pub species: Species,
    pub iso: usize,
    pub k2: f64,
    /// eigenvalue minus the vacuum energy
    pub energy: f64,
    pub predicted: f64,
    pub eigen_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraReport {
    pub vacuum_energy: f64,
    /// n(2⟨ε⟩ − 4g) with the discrete g and ⟨ε⟩
    pub vacuum_energy_predicted: f64,
    pub vacuum_residual: f64,
    pub one_particle: Vec<OneParticleRow>,
    pub max_eigen_residual: f64,
    pub max_formula_deviation: f64,
    /// worst residual of a least-squares E = a + b·k² fit per species
    pub affine_fit_residual: f64,
    /// worst norm of H|s⟩ outside the (N_A, N_Ã, P) sector of a two-particle |s⟩
    pub two_particle_leakage: f64,
    pub fluctuation_norm: f64,
}

pub fn verify_spectra(space: &FockSpace, bare: &BareParams, profile: &AmplitudeProfile) -> SpectraReport {
    let parts = build_hamiltonian(space, bare, profile);
    let h = &parts.total;
    let vac = space.vacuum();
    let (w0, vac_res) = eigen_pair(h, &vac);
    let disp = discrete_dispersion(&space.modes, bare);
    let n = space.n_modes();
    let mean_eps = disp.free(disp.k2_avg);
    let mut rows = Vec::new();
    for species in [Species::A, Species::Atilde] {
        for iso in 0..2 {
            for k in 0..n {
                let v = space.creator(species, iso, k).apply(&vac);
                let (e, r) = eigen_pair(h, &v);
                let k2 = space.modes.k2(k);
                let predicted = match species {
                    Species::A => disp.e_a(k2),
                    Species::Atilde => disp.e_atilde(k2),
                };
                rows.push(OneParticleRow { species, iso, k2, energy: e - w0, predicted, eigen_residual: r });
            }
        }
    }
    let mut fit = 0.0f64;
    for species in [Species::A, Species::Atilde] {
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.species == species).map(|r| (r.k2, r.energy)).collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        for p in &pts {
            fit = fit.max((p.1 - my - slope * (p.0 - mx)).abs());
        }
    }
    let mut leakage = 0.0f64;
    for s in 0..space.dim() {
        if (s as u64).count_ones() != 2 {
            continue;
        }
        let q = space.quantum_numbers(s);
        let out = h.apply(&basis_vector(space.dim(), s));
        let off = out
            .iter()
            .enumerate()
            .filter(|(t, v)| **v != ZERO && space.quantum_numbers(*t) != q)
            .fold(0.0, |a, (_, v)| a + v.norm_sqr());
        leakage = leakage.max(off.sqrt());
    }
    SpectraReport {
        vacuum_energy: w0,
        vacuum_energy_predicted: n as f64 * (2.0 * mean_eps - 4.0 * disp.g),
        vacuum_residual: vac_res,
        max_eigen_residual: rows.iter().fold(vac_res, |a, r| a.max(r.eigen_residual)),
        max_formula_deviation: rows.iter().fold(0.0, |a, r| a.max((r.energy - r.predicted).abs())),
        one_particle: rows,
        affine_fit_residual: fit,
        two_particle_leakage: leakage,
        fluctuation_norm: parts.fluctuation.norm(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub hermiticity: f64,
    pub su2_q: f64,
    pub su2_t: f64,
    pub q_t_commutator: f64,
    pub h_q_commutator: f64,
    pub h_t_commutator: f64,
    pub h_u1_commutator: f64,
    /// the same algebra with the opposite sign on the Ã Ã† isospin term
    pub su2_t_opposite_sign: f64,
    pub vacuum_q: [f64; 3],
}

pub fn verify_algebra(space: &FockSpace, h: &SparseMatrix, charges: &ChargeSet) -> AlgebraReport {
    use super::charges::{isospin, mutual_commutator_residual, su2_residual};
    let vac = space.vacuum();
    let ev = |op: &SparseMatrix| inner(&vac, &op.apply(&vac)).re;
    AlgebraReport {
        hermiticity: charges.hermiticity_residual().max(h.hermiticity_residual()),
        su2_q: su2_residual(&charges.q),
        su2_t: su2_residual(&charges.t),
        q_t_commutator: mutual_commutator_residual(&charges.q, &charges.t),
        h_q_commutator: mutual_commutator_residual(std::slice::from_ref(h), &charges.q),
        h_t_commutator: mutual_commutator_residual(std::slice::from_ref(h), &charges.t),
        h_u1_commutator: h.commutator(&charges.q_u1).norm(),
        su2_t_opposite_sign: su2_residual(&isospin(space, -1.0)),
        vacuum_q: [ev(&charges.q[0]), ev(&charges.q[1]), ev(&charges.q[2])],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub power: usize,
    pub norm: f64,
    pub q3: f64,
    pub q3_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipletReport {
    pub vacuum_casimir: f64,
    pub vacuum_casimir_residual: f64,
    pub vacuum_l: f64,
    pub lowering_vacuum_norm: f64,
    pub ladder: Vec<LadderStep>,
    pub vacuum_levels: usize,
    pub one_particle_casimir: f64,
    pub one_particle_l: f64,
    pub one_particle_q3: f64,
    pub one_particle_lowering_norm: f64,
    pub one_particle_levels: usize,
    pub two_particle_l: f64,
    pub two_particle_levels: usize,
}

fn ladder(charges: &ChargeSet, start: &[C64]) -> Vec<LadderStep> {
    let up = charges.raising();
    let mut v = start.to_vec();
    let mut out = Vec::new();
    for power in 0..64 {
        let norm = vec_norm(&v);
        if norm < 1e-9 {
            out.push(LadderStep { power, norm, q3: f64::NAN, q3_residual: 0.0 });
            break;
        }
        let (q3, r) = eigen_pair(&charges.q[2], &v);
        out.push(LadderStep { power, norm, q3, q3_residual: r });
        v = up.apply(&v);
    }
    out
}

fn levels(steps: &[LadderStep]) -> usize {
    steps.iter().filter(|s| s.norm >= 1e-9).count()
}

pub fn multiplet_analysis(space: &FockSpace, charges: &ChargeSet) -> MultipletReport {
    let cas = charges.casimir();
    let down = charges.lowering();
    let vac = space.vacuum();
    let (c0, r0) = eigen_pair(&cas, &vac);
    let steps = ladder(charges, &vac);
    let one = space.creator(Species::A, 0, 0).apply(&vac);
    let (c1, _) = eigen_pair(&cas, &one);
    let (q31, _) = eigen_pair(&charges.q[2], &one);
    let two = space.creator(Species::A, 1, 0).apply(&one);
    let (c2, _) = eigen_pair(&cas, &two);
    MultipletReport {
        vacuum_casimir: c0,
        vacuum_casimir_residual: r0,
        vacuum_l: casimir_l(c0),
        lowering_vacuum_norm: vec_norm(&down.apply(&vac)),
        vacuum_levels: levels(&steps),
        ladder: steps,
        one_particle_casimir: c1,
        one_particle_l: casimir_l(c1),
        one_particle_q3: q31,
        one_particle_lowering_norm: vec_norm(&down.apply(&one)),
        one_particle_levels: levels(&ladder(charges, &one)),
        two_particle_l: casimir_l(c2),
        two_particle_levels: levels(&ladder(charges, &two)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestoredState {
    pub iso: usize,
    pub k2: f64,
    pub e_b: f64,
    pub e_btilde: f64,
    pub predicted: f64,
    pub q3_b: f64,
    pub q3_btilde: f64,
    pub eigen_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestorationReport {
    pub omega: f64,
    pub phi: f64,
    pub unitarity: f64,
    pub closed_form: f64,
    pub car_residual: f64,
    pub fluctuation_norm: f64,
    /// 1 − |⟨filled Ã|0⟩_B|
    pub vacuum_filled_overlap_defect: f64,
    /// ‖X|0⟩_B‖ for Q₁, Q₂, Q₃, Q_U1, T₁, T₂, T₃
    pub charge_annihilation: [f64; 7],
    pub vacuum_energy: f64,
    pub vacuum_residual: f64,
    pub vacuum_casimir: f64,
    pub states: Vec<RestoredState>,
    pub max_degeneracy_gap: f64,
    pub max_formula_deviation: f64,
    pub max_eigen_residual: f64,
}

pub fn verify_restoration(
    space: &FockSpace,
    bare: &BareParams,
    profile: &AmplitudeProfile,
    omega_phase: f64,
    phi: f64,
) -> RestorationReport {
    let omega = std::f64::consts::FRAC_PI_2;
    let h = build_hamiltonian(space, bare, profile).total;
    let charges = build_charges(space, omega_phase);
    let bt = bogoliubov(space, omega, phi);
    let vac = bt.vacuum(space);
    let filled = basis_vector(space.dim(), space.filled_atilde_index());
    let (e0, r0) = eigen_pair(&h, &vac);
    let ops: Vec<&SparseMatrix> =
        charges.q.iter().chain(std::iter::once(&charges.q_u1)).chain(charges.t.iter()).collect();
    let charge_annihilation: [f64; 7] = std::array::from_fn(|i| vec_norm(&ops[i].apply(&vac)));
    let disp = discrete_dispersion(&space.modes, bare);
    let n = space.n_modes();
    let mut states = Vec::new();
    for iso in 0..2 {
        for k in 0..n {
            let vb = space.creator(Species::A, iso, k).apply(&vac);
            let vbt = bt.b_tilde[iso * n + k].adjoint().apply(&vac);
            let (eb, rb) = eigen_pair(&h, &vb);
            let (ebt, rbt) = eigen_pair(&h, &vbt);
            let k2 = space.modes.k2(k);
            states.push(RestoredState {
                iso,
                k2,
                e_b: eb - e0,
                e_btilde: ebt - e0,
                predicted: disp.e_b(k2),
                q3_b: eigen_pair(&charges.q[2], &vb).0,
                q3_btilde: eigen_pair(&charges.q[2], &vbt).0,
                eigen_residual: rb.max(rbt),
            });
        }
    }
    RestorationReport {
        omega,
        phi,
        unitarity: bt.unitarity,
        closed_form: bt.closed_form,
        car_residual: bt.car_residual(space),
        fluctuation_norm: bt.fluctuation_norm(&h),
        vacuum_filled_overlap_defect: 1.0 - inner(&filled, &vac).norm(),
        charge_annihilation,
        vacuum_energy: e0,
        vacuum_residual: r0,
        vacuum_casimir: eigen_pair(&charges.casimir(), &vac).0,
        max_degeneracy_gap: states.iter().fold(0.0, |a, s| a.max((s.e_b - s.e_btilde).abs())),
        max_formula_deviation: states.iter().fold(0.0, |a, s| a.max((s.e_b - s.predicted).abs())),
        max_eigen_residual: states.iter().fold(r0, |a, s| a.max(s.eigen_residual)),
        states,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairBlock {
    BB,
    BBtilde,
    BtildeBtilde,
    AA,
    AAtilde,
    AtildeAtilde,
}

impl PairBlock {
    pub fn restored(self) -> bool {
        matches!(self, PairBlock::BB | PairBlock::BBtilde | PairBlock::BtildeBtilde)
    }

    /// (N_A, N_Ã) of the block's occupation states.
    fn occupations(self, n: usize) -> (usize, usize) {
        match self {
            PairBlock::BB => (2, 2 * n),
            PairBlock::BBtilde => (1, 2 * n - 1),
            PairBlock::BtildeBtilde => (0, 2 * n - 2),
            PairBlock::AA => (2, 0),
            PairBlock::AAtilde => (1, 1),
            PairBlock::AtildeAtilde => (0, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoParticleReport {
    pub block: PairBlock,
    pub block_dim: usize,
    pub leakage: f64,
    /// eigenvalues relative to the block's vacuum energy
    pub eigenvalues: Vec<f64>,
    pub distinct: Vec<f64>,
    pub kernel_root: Option<f64>,
    pub lowest_delta: Option<f64>,
    pub relative_distinct: Vec<f64>,
    /// max difference between distinct oracle and relative-matrix levels,
    /// infinite when the level counts differ
    pub spectrum_delta: f64,
}

pub fn distinct(values: &[f64], tol: f64) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        if out.last().is_none_or(|l| (x - l).abs() > tol) {
            out.push(x);
        }
    }
    out
}

pub fn set_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Which one-particle energies enter the AÃ propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedPropagator {
    /// E_A(k) + E_Ã(−k)
    Mixed,
    /// E_Ã(k) + E_Ã(−k)
    TildeTilde,
}

pub fn discrete_pair(space: &FockSpace, bare: &BareParams, block: PairBlock, mixed: MixedPropagator) -> DiscretePair {
    let disp = discrete_dispersion(&space.modes, bare);
    let n = space.n_modes();
    let (e1, e2, sign): (fn(&crate::model::DispersionParams, f64) -> f64, fn(&crate::model::DispersionParams, f64) -> f64, f64) =
        match block {
            PairBlock::BB | PairBlock::BBtilde | PairBlock::BtildeBtilde => {
                (crate::model::DispersionParams::e_b, crate::model::DispersionParams::e_b, 1.0)
            }
            PairBlock::AA => (crate::model::DispersionParams::e_a, crate::model::DispersionParams::e_a, 1.0),
            PairBlock::AtildeAtilde => {
                (crate::model::DispersionParams::e_atilde, crate::model::DispersionParams::e_atilde, 1.0)
            }
            PairBlock::AAtilde => match mixed {
                MixedPropagator::Mixed => {
                    (crate::model::DispersionParams::e_a, crate::model::DispersionParams::e_atilde, -1.0)
                }
                MixedPropagator::TildeTilde => {
                    (crate::model::DispersionParams::e_atilde, crate::model::DispersionParams::e_atilde, -1.0)
                }
            },
        };
    DiscretePair {
        momenta: (0..n).map(|k| space.modes.momentum(k)).collect(),
        propagator: (0..n).map(|k| e1(&disp, space.modes.k2(k)) + e2(&disp, space.modes.k2(space.modes.neg(k)))).collect(),
        coupling: 2.0 * bare.lambda / space.modes.omega_volume,
        kappa: bare.kappa(),
        density_sign: sign,
    }
}

pub fn two_particle_oracle(
    space: &FockSpace,
    bare: &BareParams,
    profile: &AmplitudeProfile,
    block: PairBlock,
    mixed: MixedPropagator,
) -> TwoParticleReport {
    let h = build_hamiltonian(space, bare, profile).total;
    let n = space.n_modes();
    let (na, nat) = block.occupations(n);
    let zero = vec![0i64; space.modes.dimension()];
    let basis: Vec<usize> =
        (0..space.dim()).filter(|&s| space.quantum_numbers(s) == (na, nat, zero.clone())).collect();
    let reference = if block.restored() {
        let f = space.filled_atilde_index();
        h.get(f, f).re
    } else {
        h.get(0, 0).re
    };
    let pos = |s: usize| basis.binary_search(&s).ok();
    let mut block_m = nalgebra::DMatrix::from_element(basis.len(), basis.len(), ZERO);
    let mut leak = 0.0f64;
    for (j, &s) in basis.iter().enumerate() {
        for (t, v) in h.apply(&basis_vector(space.dim(), s)).into_iter().enumerate() {
            if v == ZERO {
                continue;
            }
            match pos(t) {
                Some(i) => block_m[(i, j)] = v,
                None => leak += v.norm_sqr(),
            }
        }
    }
    let mut eigenvalues: Vec<f64> =
        nalgebra::SymmetricEigen::new(block_m).eigenvalues.iter().map(|e| e - reference).collect();
    eigenvalues.sort_by(f64::total_cmp);
    let pair = discrete_pair(space, bare, block, mixed);
    let kernel_root = pair.lowest_root();
    let lowest = eigenvalues.first().copied();
    let distinct_oracle = distinct(&eigenvalues, 1e-9);
    let relative_distinct = distinct(&pair.relative_spectrum(), 1e-9);
    TwoParticleReport {
        block,
        block_dim: basis.len(),
        leakage: leak.sqrt(),
        lowest_delta: kernel_root.zip(lowest).map(|(r, l)| (r - l).abs()),
        kernel_root,
        spectrum_delta: set_distance(&distinct_oracle, &relative_distinct),
        distinct: distinct_oracle,
        relative_distinct,
        eigenvalues,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormInvarianceReport {
    pub angles: [f64; 3],
    pub quoted_constraints: f64,
    pub exact_constraints: f64,
    /// ‖fA + gÃ† − (N a + M ã†)‖ with the exact (N, M)
    pub field_identity: f64,
    /// the same with the quoted full-angle (N, M)
    pub field_identity_quoted: f64,
    /// ‖H − H(N, M; a, ã)‖ / ‖H‖
    pub hamiltonian_mismatch: f64,
    pub vacuum_energy: f64,
    pub rotated_vacuum_energy: f64,
}

pub fn form_invariance_check(
    space: &FockSpace,
    bare: &BareParams,
    amps: &AmplitudePair,
    angles: [f64; 3],
    omega_phase: f64,
) -> FormInvarianceReport {
    let [alpha, beta, gamma] = angles;
    let charges = build_charges(space, omega_phase);
    let u = charges.q[2]
        .exp_i(gamma)
        .mul(&charges.q[1].exp_i(beta))
        .mul(&charges.q[0].exp_i(alpha))
        .pruned(1e-300);
    let ud = u.adjoint();
    let n = space.n_modes();
    let rotate = |s: Species| -> Vec<SparseMatrix> {
        (0..2)
            .flat_map(|iso| (0..n).map(move |k| (iso, k)))
            .map(|(iso, k)| ud.mul(space.annihilator(s, iso, k)).mul(&u).pruned(1e-15))
            .collect()
    };
    let a_rot = rotate(Species::A);
    let at_rot = rotate(Species::Atilde);
    let exact = amps.rotate(alpha, beta, gamma, omega_phase);
    let quoted = amps.rotate_quoted(alpha, beta, gamma, omega_phase);
    let original = FieldOps::from_space(space, &AmplitudeProfile::Constant(*amps));
    let field_exact = FieldOps::from_ladders(&space.modes, &a_rot, &at_rot, &AmplitudeProfile::Constant(exact));
    let field_quoted = FieldOps::from_ladders(&space.modes, &a_rot, &at_rot, &AmplitudeProfile::Constant(quoted));
    let mismatch = |f: &FieldOps| {
        original.phi.iter().zip(&f.phi).fold(0.0f64, |m, (x, y)| m.max(x.sub(y).norm()))
    };
    let h = hamiltonian_from_field(&space.modes, bare, &original);
    let h_rot = hamiltonian_from_field(&space.modes, bare, &field_exact);
    let vac = space.vacuum();
    let rotated_vac = ud.apply(&vac);
    FormInvarianceReport {
        angles,
        quoted_constraints: quoted.constraint_residuals().max(),
        exact_constraints: exact.constraint_residuals().max(),
        field_identity: mismatch(&field_exact),
        field_identity_quoted: mismatch(&field_quoted),
        hamiltonian_mismatch: h.sub(&h_rot).norm() / h.norm(),
        vacuum_energy: eigen_pair(&h, &vac).0,
        rotated_vacuum_energy: eigen_pair(&h_rot, &rotated_vac).0,
    }
}
