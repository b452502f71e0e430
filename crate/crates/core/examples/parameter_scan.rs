//! Drive the command-line front end in-process: a coupling scan to csv.

fn main() {
    let mut out = Vec::new();
    let code = cxc_model::cli::run(["cxc", "bound", "--grid", "1.2:10:8:log", "--format", "csv", "--jobs", "2"], &mut out);
    let text = String::from_utf8(out).unwrap();
    for line in text.lines() {
        let cols: Vec<&str> = line.split(',').take(5).collect();
        println!("{}", cols.join(","));
    }
    println!("exit {code}");
}
