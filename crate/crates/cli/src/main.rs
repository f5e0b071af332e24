fn main() {
    std::process::exit(lss_sense_cli::run(std::env::args_os()));
}
