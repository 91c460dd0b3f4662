fn main() {
    std::process::exit(magnon_memory::io::cli::cli_dispatch(std::env::args_os()));
}
