fn main() {
    let code = moutard_cli::run_from_args(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
