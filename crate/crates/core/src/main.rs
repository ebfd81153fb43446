fn main() {
    std::process::exit(hartogs::cli::main_with_args(std::env::args_os()));
}
