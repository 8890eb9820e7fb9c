fn main() {
    std::process::exit(charq_cli::main_with(std::env::args_os()));
}
