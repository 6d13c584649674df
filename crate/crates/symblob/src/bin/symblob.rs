fn main() {
    std::process::exit(symblob::cli::run());
}
