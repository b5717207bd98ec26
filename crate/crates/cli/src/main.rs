use std::process::ExitCode;

fn main() -> ExitCode {
    let code = aitgl_cli::run(std::env::args_os());
    ExitCode::from(code)
}
