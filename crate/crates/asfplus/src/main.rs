use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(asfplus::cli::run(std::env::args()) as u8)
}
