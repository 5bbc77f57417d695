fn main() {
    std::process::exit(stars_core::cli::cli_main(std::env::args_os()));
}
