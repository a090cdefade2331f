fn main() {
    std::process::exit(mlcoset::cli::main());
}
