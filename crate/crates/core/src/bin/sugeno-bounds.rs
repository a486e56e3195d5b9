fn main() {
    std::process::exit(sugeno_bounds::cli::run(std::env::args_os()));
}
