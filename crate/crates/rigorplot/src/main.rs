fn main() {
    std::process::exit(rigorplot::cli::run());
}
