fn main() -> std::process::ExitCode {
    spincat::cli::main()
}
