fn main() {
    std::process::exit(mubs_cli::run(std::env::args_os()));
}
