use cxc_model::fock::charges::{isospin, su2_residual};
use cxc_model::fock::sparse::C64;
use cxc_model::fock::*;
use cxc_model::model::BareParams;
use proptest::prelude::*;

fn bare(lambda: f64) -> BareParams {
    BareParams::new(1.0, 1.0, lambda).unwrap()
}

fn space(n: usize) -> FockSpace {
    FockSpace::new(ModeSet::line(n, 0.7, 1.0).unwrap()).unwrap()
}

fn standard() -> AmplitudeProfile {
    AmplitudeProfile::Constant(AmplitudePair::standard())
}

#[test]
fn free_pairs_are_sums_of_one_particle_energies() {
    let s = space(2);
    let b = bare(0.0);
    let disp = discrete_dispersion(&s.modes, &b);
    let k2 = s.modes.k2(0);
    let (ea, et) = (disp.e_a(k2), disp.e_atilde(k2));
    for (block, want) in [
        (PairBlock::AA, 2.0 * ea),
        (PairBlock::AtildeAtilde, 2.0 * et),
        (PairBlock::AAtilde, ea + et),
    ] {
        let r = two_particle_oracle(&s, &b, &standard(), block, MixedPropagator::Mixed);
        for e in &r.eigenvalues {
            assert!((e - want).abs() < 1e-13, "{block:?}: {e} vs {want}");
        }
    }
}

#[test]
fn pair_blocks_match_discrete_kernel_with_zero_mode() {
    // three modes include k = 0, so the k·q part of the kernel is exercised
    let s = space(3);
    let b = bare(0.3);
    for r in pair_oracle(&s, &b).blocks {
        assert_eq!(r.leakage, 0.0);
        assert!(r.lowest_delta.unwrap() < 1e-10, "{:?}: {:?}", r.block, r.lowest_delta);
        assert!(r.spectrum_delta < 1e-10, "{:?}: {}", r.block, r.spectrum_delta);
    }
}

#[test]
fn mixed_block_needs_both_branches_in_the_propagator() {
    let s = space(2);
    let b = bare(0.3);
    let p = pair_oracle(&s, &b);
    let mixed = p.blocks.iter().find(|r| r.block == PairBlock::AAtilde).unwrap();
    assert!(mixed.lowest_delta.unwrap() < 1e-12);
    assert!(p.mixed_alternative.lowest_delta.unwrap() > 1.0);
}

#[test]
fn restored_blocks_isospectral() {
    for n in [1, 2, 3] {
        let p = pair_oracle(&space(n), &bare(0.45));
        assert!(p.restored_isospectrality < 1e-12, "n = {n}: {}", p.restored_isospectrality);
    }
}

#[test]
fn violating_pair_switches_on_number_changing_terms() {
    let s = space(2);
    let b = bare(0.3);
    let ok = build_hamiltonian(&s, &b, &standard());
    assert_eq!(ok.fluctuation.nnz(), 0);
    let bad = build_hamiltonian(&s, &b, &AmplitudeProfile::Constant(violating_pair()));
    assert!(bad.fluctuation.norm() > 1e-3);
}

#[test]
fn opposite_isospin_sign_is_not_su2() {
    let s = space(1);
    assert!(su2_residual(&isospin(&s, 1.0)) < 1e-14);
    assert!(su2_residual(&isospin(&s, -1.0)) > 1.0);
}

#[test]
fn quoted_rotation_keeps_constraints_but_not_the_field() {
    let s = space(1);
    let amps = amplitudes_from_angles(0.4, 0.9, -0.3);
    let r = form_invariance_check(&s, &bare(0.3), &amps, [0.7, -0.4, 1.1], 0.5);
    assert!(r.quoted_constraints < 1e-14);
    assert!(r.field_identity < 1e-13);
    assert!(r.field_identity_quoted > 0.1);
    assert!(r.hamiltonian_mismatch < 1e-12);
}

#[test]
fn bogoliubov_at_quarter_turn_mixes_numbers() {
    let s = space(1);
    let h = build_hamiltonian(&s, &bare(0.3), &standard()).total;
    let quarter = bogoliubov(&s, std::f64::consts::FRAC_PI_4, 0.0);
    assert!(quarter.closed_form < 1e-13);
    assert!(quarter.fluctuation_norm(&h) > 0.1);
    let half = bogoliubov(&s, std::f64::consts::FRAC_PI_2, 0.0);
    assert!(half.fluctuation_norm(&h) < 1e-12);
}

#[test]
fn compact_form_agrees_with_field_construction() {
    for n in [1, 2, 3] {
        let r = run_oracle(&OracleConfig { n_modes: n, ..OracleConfig::default() }).unwrap();
        assert!(r.compact_form_mismatch < 1e-14, "n = {n}: {}", r.compact_form_mismatch);
    }
}

#[test]
fn default_suite_is_clean_for_three_modes() {
    let r = run_oracle(&OracleConfig { n_modes: 3, ..OracleConfig::default() }).unwrap();
    assert_eq!(r.dimension, 4096);
    assert!(cxc_model::verify::oracle_failures(&r).is_empty(), "{:?}", cxc_model::verify::oracle_failures(&r));
}

#[test]
fn three_dimensional_modes() {
    let modes = ModeSet::new(vec![vec![1, 0, 0], vec![-1, 0, 0]], 0.6, 2.0).unwrap();
    let s = FockSpace::new(modes).unwrap();
    let b = bare(0.3);
    let spectra = verify_spectra(&s, &b, &standard());
    assert!(spectra.max_formula_deviation < 1e-13);
    for r in pair_oracle(&s, &b).blocks {
        assert!(r.lowest_delta.unwrap() < 1e-10, "{:?}", r.block);
    }
}

#[test]
fn charge_phase_leaves_algebra_intact() {
    let s = space(2);
    let prof = AmplitudeProfile::Constant(amplitudes_from_angles(0.2, 0.1, 0.6));
    let h = build_hamiltonian(&s, &bare(0.3), &prof).total;
    for w in [0.0, 0.9, -2.1] {
        let a = verify_algebra(&s, &h, &build_charges(&s, w));
        assert!(a.su2_q < 1e-13 && a.h_q_commutator < 1e-12, "omega = {w}");
    }
}

#[test]
fn one_particle_spectrum_affine_for_growing_mode_sets() {
    // more modes on the same grid keep the spectrum exactly affine in k²
    for n in 1..=3 {
        let r = verify_spectra(&space(n), &bare(0.2), &standard());
        assert!(r.affine_fit_residual < 1e-12);
        assert!((r.vacuum_energy - r.vacuum_energy_predicted).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn valid_amplitudes_give_no_fluctuations(t in -3.0f64..3.0, p in -3.0f64..3.0, f in -3.0f64..3.0) {
        let s = space(1);
        let h = build_hamiltonian(&s, &bare(0.4), &AmplitudeProfile::Constant(amplitudes_from_angles(t, p, f)));
        prop_assert!(h.fluctuation.norm() < 1e-12);
    }

    #[test]
    fn orthogonality_defect_shows_up_in_fluctuations(x in 0.1f64..1.0, y in -1.0f64..1.0) {
        let s = space(1);
        let n = (x * x + y * y).sqrt();
        let pair = AmplitudePair {
            f: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            g: [C64::new(x / n, 0.0), C64::new(y / n, 0.0)],
        };
        let h = build_hamiltonian(&s, &bare(0.4), &AmplitudeProfile::Constant(pair));
        prop_assert!(h.fluctuation.norm() > 1e-3);
    }

    #[test]
    fn form_invariance_at_random_angles(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, w in -3.0f64..3.0) {
        let s = space(1);
        let amps = amplitudes_from_angles(0.3, -0.7, 1.2);
        let r = form_invariance_check(&s, &bare(0.3), &amps, [a, b, c], w);
        prop_assert!(r.exact_constraints < 1e-14);
        prop_assert!(r.hamiltonian_mismatch < 1e-12);
        prop_assert!((r.vacuum_energy - r.rotated_vacuum_energy).abs() < 1e-12);
    }
}
