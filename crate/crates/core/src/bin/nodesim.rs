fn main() -> std::process::ExitCode {
    nodesim::cli::main()
}
