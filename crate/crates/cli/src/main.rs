fn main() {
    std::process::exit(sra_cli::run_main(std::env::args_os()));
}
