fn main() {
    std::process::exit(hbspace::cli::main_from_env());
}
