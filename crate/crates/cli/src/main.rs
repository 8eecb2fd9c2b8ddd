fn main() {
    std::process::exit(entrogeo_cli::run());
}
