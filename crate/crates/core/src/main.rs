fn main() {
    std::process::exit(fastmotif::cli::run(std::env::args_os()));
}
