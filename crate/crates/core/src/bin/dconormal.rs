fn main() {
    std::process::exit(dconormal::cli::main());
}
