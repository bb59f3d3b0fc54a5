fn main() {
    std::process::exit(qspace_spf::harness::cli::run(std::env::args_os()));
}
