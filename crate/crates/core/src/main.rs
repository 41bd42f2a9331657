fn main() {
    std::process::exit(mediumband::cli::dispatch(std::env::args_os()));
}
