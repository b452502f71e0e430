//! Isoscalar bound state at G = 5 and its momentum-space amplitude.

use cxc_model::bound_state::{solve_isoscalar, wavefunction};
use cxc_model::model::scheme_from_physical;

fn main() {
    let scheme = scheme_from_physical(1.0, 5.0, 1.0).expect("scheme");
    let state = solve_isoscalar(&scheme).expect("solves");
    println!("χ = {:.6}, z = {:.6}, μ₀ = {:.6}", state.chi, state.z, state.mu0);
    println!("{:?}", state.diagnostics);
    let wf = wavefunction(&scheme, &state).expect("wavefunction");
    println!("self-consistency {:.2e}, ∫D² = {:.6}", wf.self_consistency, wf.norm_squared);
    for i in 0..=8 {
        let k = scheme.cutoff * i as f64 / 8.0;
        println!("k = {k:.4}  D(k) = {:.6}", wf.amplitude(k));
    }
}
