fn main() {
    std::process::exit(xxchain::cli::main_with_args(std::env::args_os()));
}
