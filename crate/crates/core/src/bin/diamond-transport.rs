fn main() {
    std::process::exit(diamond_transport::cli::run(std::env::args_os()));
}
