fn main() {
    std::process::exit(bordered_moduli::cli::run(std::env::args_os()));
}
