fn main() {
    std::process::exit(rabi_absorb::cli::run(std::env::args_os()));
}
