fn main() {
    std::process::exit(qv::cli::run(std::env::args_os()));
}
