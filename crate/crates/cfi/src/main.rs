fn main() {
    std::process::exit(cfi::cli::run(std::env::args_os()));
}
