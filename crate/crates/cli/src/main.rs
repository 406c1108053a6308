fn main() {
    std::process::exit(dcwalk_cli::main_with_args(std::env::args_os()));
}
