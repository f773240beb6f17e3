fn main() {
    std::process::exit(inqc::cli::main());
}
