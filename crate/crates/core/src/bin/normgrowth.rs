fn main() {
    std::process::exit(normgrowth::cli::main());
}
