fn main() {
    std::process::exit(quatrad::cli::run(std::env::args_os()));
}
