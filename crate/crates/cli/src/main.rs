fn main() {
    std::process::exit(slant_cli::main_with_args(std::env::args_os()));
}
