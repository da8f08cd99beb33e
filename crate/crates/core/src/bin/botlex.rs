fn main() {
    std::process::exit(botlex::cli::run(std::env::args_os()));
}
