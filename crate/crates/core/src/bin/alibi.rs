fn main() -> std::process::ExitCode {
    alibi_index::cli::main()
}
