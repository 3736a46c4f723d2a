fn main() {
    std::process::exit(fanoise_cli::run(std::env::args_os()));
}
