fn main() {
    std::process::exit(calogero::cli::run(std::env::args_os()));
}
