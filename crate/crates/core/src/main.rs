fn main() {
    std::process::exit(wpcount::cli::run(std::env::args().collect()));
}
