fn main() {
    std::process::exit(mubh_cli::run(std::env::args_os()));
}
