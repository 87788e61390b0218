fn main() {
    std::process::exit(c4c8_torus::cli::run_cli(std::env::args_os()));
}
