fn main() {
    std::process::exit(nframe::cli::run(std::env::args_os()));
}
