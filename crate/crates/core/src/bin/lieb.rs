fn main() {
    std::process::exit(lieb_core::cli::run(std::env::args_os()));
}
