//! Vacuum energy density across the critical coupling.

use cxc_model::model::{classify_phase, critical_coupling, vacuum_energy_density_physical};
use cxc_model::numerics::grid;

fn main() {
    let g_cr = critical_coupling();
    println!("G_cr = {g_cr:.6}");
    for g in grid(1.0, 7.0, 13, false) {
        let w = vacuum_energy_density_physical(1.0, g, 1.0);
        println!("G = {g:5.2}  W = {w:+.5}  {:?}", classify_phase(g));
    }
}
