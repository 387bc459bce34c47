fn main() {
    std::process::exit(hblr::cli::main_with_args(std::env::args_os()));
}
