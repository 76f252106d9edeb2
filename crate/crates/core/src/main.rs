fn main() {
    std::process::exit(proxkit::cli::run(std::env::args_os()));
}
