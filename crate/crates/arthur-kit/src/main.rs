fn main() {
    std::process::exit(arthur_kit::cli::run(std::env::args_os()));
}
