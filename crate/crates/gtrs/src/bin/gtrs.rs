fn main() {
    std::process::exit(gtrs::cli::run());
}
