fn main() {
    std::process::exit(tcspan_cli::cli_main(std::env::args_os()));
}
