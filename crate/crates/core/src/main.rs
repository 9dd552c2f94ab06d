fn main() {
    std::process::exit(slowdiff_core::cli::main_entry());
}
