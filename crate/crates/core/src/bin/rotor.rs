fn main() {
    std::process::exit(rotor::cli::run(std::env::args_os()));
}
