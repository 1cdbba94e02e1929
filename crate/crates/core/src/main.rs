fn main() {
    std::process::exit(fermibound::cli::run(std::env::args_os()));
}
