fn main() {
    std::process::exit(ptolemy::cli_io::main_with_args(std::env::args_os()));
}
