fn main() {
    std::process::exit(potbal::cli::run());
}
