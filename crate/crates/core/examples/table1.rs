//! Relative momentum scale z = Λ/χ of the isoscalar bound state.

use cxc_model::bound_state::{existence_threshold, table1, C1Variant, TABLE1_QUOTED};

fn main() {
    let gs: Vec<f64> = TABLE1_QUOTED.iter().map(|r| r.0).collect();
    let rows = table1(&gs, C1Variant::Corrected).expect("every row solves");
    println!("{:>6} {:>10} {:>8} {:>8}", "G", "z", "quoted", "dev %");
    for r in rows {
        let z = r.z.unwrap_or(f64::NAN);
        println!("{:>6} {:>10.4} {:>8} {:>+8.2}", r.coupling, z, r.z_quoted.unwrap_or(f64::NAN), 100.0 * r.deviation.unwrap_or(f64::NAN));
    }
    println!("state exists above G = {:.6}", existence_threshold(C1Variant::Corrected).unwrap());
}
