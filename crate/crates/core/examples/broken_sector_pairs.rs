//! AA, AÃ and ÃÃ pairs above the broken vacuum; the AÃ block tells which
//! branches enter its propagator.

use cxc_model::fock::*;
use cxc_model::model::BareParams;

fn main() {
    let space = FockSpace::new(ModeSet::line(3, 0.7, 1.0).unwrap()).unwrap();
    let bare = BareParams::new(1.0, 1.0, 0.3).unwrap();
    let p = pair_oracle(&space, &bare);
    for r in p.blocks.iter().filter(|r| !r.block.restored()) {
        println!("{:?}: lowest {:+.6}, kernel {:+.6}, |Δ| = {:.1e}", r.block, r.eigenvalues[0], r.kernel_root.unwrap(), r.lowest_delta.unwrap());
    }
    let alt = &p.mixed_alternative;
    println!("AÃ with E_Ã + E_Ã instead: kernel {:+.6}, |Δ| = {:.3}", alt.kernel_root.unwrap(), alt.lowest_delta.unwrap());
}
