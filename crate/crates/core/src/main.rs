use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let exec = bloch_rspt::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(exec.stdout.as_bytes());
    let _ = std::io::stderr().write_all(exec.stderr.as_bytes());
    ExitCode::from(exec.code as u8)
}
