fn main() {
    std::process::exit(smmt::cli::dispatch(std::env::args_os()));
}
