fn main() {
    let code = cpa::cli::run(std::env::args().skip(1), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
