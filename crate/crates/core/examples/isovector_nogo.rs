//! The isovector condition 1 = RHS(G, χ) never has a solution.

use cxc_model::bound_state::isovector_rhs;

fn main() {
    for g in [1.0, 10.0, 1e3, 1e6, 1e9] {
        let at_zero = isovector_rhs(g, 0.0);
        let at_one = isovector_rhs(g, 1.0);
        println!("G = {g:<8e} RHS(χ=0) = {at_zero:.6}  RHS(χ=Λ) = {at_one:.6}  2/3 - sup = {:.2e}", 2.0 / 3.0 - at_zero);
    }
}
