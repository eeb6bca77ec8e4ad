fn main() {
    std::process::exit(orthospec_cli::main_with_args(std::env::args_os()));
}
