fn main() {
    std::process::exit(gwlines::cli::main_with_args(std::env::args_os()));
}
