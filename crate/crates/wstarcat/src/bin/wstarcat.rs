fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let env_tol = std::env::var("WSTAR_TOL").ok();
    let (code, out) = wstarcat::cli::run(&args, env_tol.as_deref());
    print!("{out}");
    std::process::exit(code);
}
