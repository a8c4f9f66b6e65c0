fn main() {
    std::process::exit(knockout::cli::run(std::env::args_os()));
}
