//! Small-coupling expansion of the renormalized coupling and cutoff.

use cxc_model::model::{measure_series, renormalize, series_ratios, BareParams};

fn main() {
    for a in [1e-3, 1e-2, 0.1] {
        let (rg, rl) = series_ratios(a).expect("converges");
        println!("alpha0 = {a:<6} g ratio {rg:.8}  cutoff ratio {rl:.8}");
    }
    let fit = measure_series(1e-4, 2e-2, 12).expect("fit");
    println!("coupling coefficients {:?} (quoted {:?})", fit.coupling_coeffs, fit.coupling_quoted);
    println!("cutoff coefficients   {:?} (quoted {:?})", fit.cutoff_coeffs, fit.cutoff_quoted);

    let s = renormalize(&BareParams::new(1.0, 1.0, 2.0).expect("bare")).expect("scheme");
    println!("m = 1, λ = 2  ->  M = {:.6}, G = {:.6}, Λ = {:.6}", s.mass, s.coupling, s.cutoff);
}
