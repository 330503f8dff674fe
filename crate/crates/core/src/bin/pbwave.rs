fn main() {
    std::process::exit(pbwave::cli::main());
}
