fn main() {
    std::process::exit(barenblatt::cli::main_entry());
}
