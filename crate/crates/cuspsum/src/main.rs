use std::process::ExitCode;

fn main() -> ExitCode {
    cuspsum::run(std::env::args_os())
}
