use std::process::ExitCode;

fn main() -> ExitCode {
    partrace::cli::main_with_args(std::env::args_os())
}
