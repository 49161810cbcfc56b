fn main() -> std::process::ExitCode {
    qgraph::cli::main()
}
