fn main() {
    std::process::exit(betacoal::cli::run(std::env::args_os()));
}
