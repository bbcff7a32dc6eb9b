fn main() {
    std::process::exit(grapevine::cli::run(std::env::args_os()));
}
