//! The command-line front end driven in-process.

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cpa::cli::run(["maxf", "--help"].map(String::from), &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit {code}");
}
