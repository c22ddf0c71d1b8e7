fn main() {
    std::process::exit(farkas::cli::run(std::env::args_os()));
}
