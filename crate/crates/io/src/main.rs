use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(miqodd_io::cli::run(std::env::args()) as u8)
}
