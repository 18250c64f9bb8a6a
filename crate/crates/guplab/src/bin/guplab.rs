fn main() {
    std::process::exit(guplab::cli::main_with_args(std::env::args_os()));
}
