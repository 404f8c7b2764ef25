fn main() {
    std::process::exit(hypergrowth::cli::main_with_args(std::env::args_os()));
}
