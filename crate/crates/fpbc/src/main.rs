fn main() {
    std::process::exit(fpbc::cli::main_with(std::env::args().collect()));
}
