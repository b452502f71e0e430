//! Every acceptance criterion with its verdict.

fn main() {
    let report = cxc_model::verify::run_acceptance();
    for c in &report.criteria {
        println!("{}", c.line());
    }
}
