fn main() { std::process::exit(nstorus::cli::run_cli(std::env::args().skip(1))); }
