fn main() {
    std::process::exit(ovalshell::cli::main_with_args(std::env::args_os()));
}
