fn main() {
    std::process::exit(astrolabe_cli::run(std::env::args_os()));
}
