fn main() {
    std::process::exit(cartan::cli::run());
}
