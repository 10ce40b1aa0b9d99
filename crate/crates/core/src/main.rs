fn main() {
    std::process::exit(memcompose::cli::main_with_args(std::env::args_os()));
}
