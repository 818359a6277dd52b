fn main() {
    std::process::exit(kuramoto_limits_cli::run_cli(std::env::args_os()));
}
