fn main() {
    std::process::exit(srde_lab::cli::run());
}
