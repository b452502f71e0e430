//! Exact operators on two modes: one-particle spectra, charge algebra and
//! the vacuum multiplet.

use cxc_model::fock::*;
use cxc_model::model::BareParams;

fn main() {
    let space = FockSpace::new(ModeSet::line(2, 0.7, 1.0).unwrap()).unwrap();
    let bare = BareParams::new(1.0, 1.0, 0.3).unwrap();
    let amps = AmplitudeProfile::Constant(amplitudes_from_angles(0.3, 0.2, 0.1));
    println!("Fock dimension {}", space.dim());

    let spectra = verify_spectra(&space, &bare, &amps);
    for row in &spectra.one_particle {
        println!("{:?}_{} k² = {:.3}: E = {:+.6}, formula {:+.6}", row.species, row.iso, row.k2, row.energy, row.predicted);
    }
    println!("H_Fl norm {:.1e}", spectra.fluctuation_norm);

    let h = build_hamiltonian(&space, &bare, &amps).total;
    let charges = build_charges(&space, 0.0);
    let alg = verify_algebra(&space, &h, &charges);
    println!("su(2) residuals {:.1e} {:.1e}, [H, Q] {:.1e}", alg.su2_q, alg.su2_t, alg.h_q_commutator);

    let m = multiplet_analysis(&space, &charges);
    println!("vacuum L = {}, {} levels; one particle L = {}, {} levels", m.vacuum_l, m.vacuum_levels, m.one_particle_l, m.one_particle_levels);
}
