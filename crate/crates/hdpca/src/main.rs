fn main() {
    std::process::exit(hdpca::cli::run(std::env::args_os()));
}
