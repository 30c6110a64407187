fn main() {
    std::process::exit(liebraid::cli::main_entry());
}
