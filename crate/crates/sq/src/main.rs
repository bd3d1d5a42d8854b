fn main() {
    std::process::exit(sq::cli::run(std::env::args_os()));
}
