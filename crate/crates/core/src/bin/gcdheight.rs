fn main() {
    std::process::exit(gcd_height::cli::run(std::env::args_os()));
}
