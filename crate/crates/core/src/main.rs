fn main() {
    std::process::exit(geogossip::cli::main_from_env());
}
