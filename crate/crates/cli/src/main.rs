fn main() {
    std::process::exit(eurelax_cli::main_with_args(std::env::args_os()));
}
