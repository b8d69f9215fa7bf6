fn main() {
    std::process::exit(tricircle::cli::run());
}
