fn main() {
    std::process::exit(abssep_cli::run(std::env::args_os()));
}
