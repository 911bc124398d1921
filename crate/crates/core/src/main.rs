fn main() {
    std::process::exit(matchpoly::cli::run());
}
