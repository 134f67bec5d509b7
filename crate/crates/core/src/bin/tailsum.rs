fn main() {
    std::process::exit(tailsum::experiment::cli::main_with_args(std::env::args_os()));
}
