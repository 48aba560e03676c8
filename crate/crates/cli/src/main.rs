fn main() {
    std::process::exit(ptsusy_cli::main_with_args(std::env::args_os()));
}
