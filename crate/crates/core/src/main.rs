fn main() {
    std::process::exit(uasa::cli::main_with_args(std::env::args_os()));
}
