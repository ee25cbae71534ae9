fn main() {
    std::process::exit(isac_region::cli::main_with_std_io());
}
