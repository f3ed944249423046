fn main() {
    std::process::exit(knotsum::cli::run(std::env::args_os()));
}
