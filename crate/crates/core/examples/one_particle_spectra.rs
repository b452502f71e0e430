//! Dispersion of the three branches at a few couplings, in units of Mc² and Mc.

use cxc_model::model::{masses_and_gaps, scheme_from_physical, spectrum, SpectrumBranch};

fn main() {
    for g in [0.5, 2.0, 5.0] {
        let scheme = scheme_from_physical(1.0, g, 1.0).expect("valid coupling");
        let report = masses_and_gaps(&scheme);
        println!("G = {g}: regime {:?}, m_A = {:.4}, m_Ã = {:.4}", report.regime, report.m_a, report.m_atilde);
        println!("{:>6} {:>10} {:>10} {:>10}", "k", "E_A", "E_Ã", "E_B");
        for k in [0.0, 0.5, 1.0, 2.0] {
            let e: Vec<f64> = SpectrumBranch::ALL.iter().map(|&b| spectrum(b, k, &scheme).energy).collect();
            println!("{k:>6.2} {:>10.5} {:>10.5} {:>10.5}", e[0], e[1], e[2]);
        }
        println!("gap sum {:.6} (branch formulas give {:.6})\n", report.gap_sum, report.gap_sum_identity);
    }
}
