fn main() {
    let code = cxc_model::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
