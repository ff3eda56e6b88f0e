fn main() {
    std::process::exit(bergman_lab::cli::main_with(std::env::args()));
}
