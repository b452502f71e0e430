//! Bogoliubov rotation of the Ã pairs and the restored vacuum at ω = π/2.

use cxc_model::fock::*;
use cxc_model::model::BareParams;

fn main() {
    let space = FockSpace::new(ModeSet::line(2, 0.7, 1.0).unwrap()).unwrap();
    let bare = BareParams::new(1.0, 1.0, 0.3).unwrap();
    let standard = AmplitudeProfile::Constant(AmplitudePair::standard());
    let h = build_hamiltonian(&space, &bare, &standard).total;
    for omega in [0.0, 0.4, 0.8, 1.2, std::f64::consts::FRAC_PI_2] {
        let t = bogoliubov(&space, omega, 0.0);
        println!("ω = {omega:.3}: number-changing part {:.3e}", t.fluctuation_norm(&h));
    }
    let r = verify_restoration(&space, &bare, &standard, 0.0, 0.0);
    println!("vacuum energy {:.1e}, Casimir {:.1e}", r.vacuum_energy, r.vacuum_casimir);
    println!("charges on the vacuum {:?}", r.charge_annihilation.map(|x| format!("{x:.0e}")));
    for s in &r.states {
        println!("iso {} k² {:.2}: E_B = {:.6} E_B̃ = {:.6}  Q₃ = {:+} / {:+}", s.iso, s.k2, s.e_b, s.e_btilde, s.q3_b, s.q3_btilde);
    }
}
