fn main() {
    std::process::exit(rheospec::cli::run(std::env::args_os()));
}
