fn main() {
    std::process::exit(pconvex_cli::main_with(std::env::args_os()));
}
