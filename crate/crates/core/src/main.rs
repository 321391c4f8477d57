fn main() {
    std::process::exit(opmoment::cli::run(std::env::args_os()));
}
