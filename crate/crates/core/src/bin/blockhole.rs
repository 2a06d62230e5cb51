fn main() {
    std::process::exit(blockhole::cli::main());
}
