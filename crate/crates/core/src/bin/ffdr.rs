fn main() -> std::process::ExitCode {
    ffdr::cli::run()
}
