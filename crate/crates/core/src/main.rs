fn main() {
    std::process::exit(lieinv::cli::run());
}
