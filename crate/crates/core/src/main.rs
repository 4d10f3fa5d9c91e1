fn main() {
    std::process::exit(periodic_core::cli::main_exit_code());
}
