use std::process::ExitCode;

fn main() -> ExitCode {
    memfuzz::cli::run()
}
