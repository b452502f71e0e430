//! Rotating the ladders by the pair charges and the amplitudes by the
//! doublet matrix leaves the field and the Hamiltonian unchanged.

use cxc_model::fock::*;
use cxc_model::model::BareParams;

fn main() {
    let space = FockSpace::new(ModeSet::line(2, 0.7, 1.0).unwrap()).unwrap();
    let bare = BareParams::new(1.0, 1.0, 0.3).unwrap();
    let amps = amplitudes_from_angles(0.3, 0.2, 0.1);
    for angles in [[0.0, 0.0, 0.0], [0.3, 0.5, 0.7], [2.0, -1.0, 0.4]] {
        let r = form_invariance_check(&space, &bare, &amps, angles, 0.4);
        println!(
            "{angles:?}: field {:.1e} (full-angle formula {:.3}), H {:.1e}, vacuum {:.6} vs {:.6}",
            r.field_identity, r.field_identity_quoted, r.hamiltonian_mismatch, r.vacuum_energy, r.rotated_vacuum_energy
        );
    }
}
