fn main() {
    std::process::exit(persep::cli::main_from_env());
}
