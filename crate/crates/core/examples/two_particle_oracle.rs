//! Exact two-particle blocks in the restored sector against the discrete kernel.

use cxc_model::fock::*;
use cxc_model::model::BareParams;

fn main() {
    let bare = BareParams::new(1.0, 1.0, 0.45).unwrap();
    for n in [1, 2, 3] {
        let space = FockSpace::new(ModeSet::line(n, 0.7, 1.0).unwrap()).unwrap();
        let p = pair_oracle(&space, &bare);
        println!("{n} modes, isospectral to {:.1e}", p.restored_isospectrality);
        for r in p.blocks.iter().filter(|r| r.block.restored()) {
            println!("  {:?} dim {}: levels {:?}, kernel root {:?}", r.block, r.block_dim, r.distinct, r.kernel_root);
        }
    }
}
