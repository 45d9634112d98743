fn main() {
    std::process::exit(gyrowalk_cli::run());
}
