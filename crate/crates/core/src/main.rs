fn main() {
    std::process::exit(sandwich_tn::cli::run(std::env::args_os()));
}
