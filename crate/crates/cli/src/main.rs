use std::process::ExitCode;

fn main() -> ExitCode {
    let code = sgedr_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    ExitCode::from(code)
}
