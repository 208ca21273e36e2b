fn main() {
    std::process::exit(noncentral::cli::run());
}
