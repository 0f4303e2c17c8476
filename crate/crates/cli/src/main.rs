fn main() {
    std::process::exit(lcgraph_cli::run(std::env::args_os()));
}
