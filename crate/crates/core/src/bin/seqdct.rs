fn main() -> std::process::ExitCode {
    seqdct::cli::main()
}
