fn main() {
    std::process::exit(teich_cli::run(std::env::args_os()));
}
