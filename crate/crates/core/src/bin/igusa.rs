fn main() {
    std::process::exit(igusa_core::cli::run(std::env::args_os()));
}
