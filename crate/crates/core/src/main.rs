use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(multihop_contention::cli::run() as u8)
}
