use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match constcoef_cli::run_args(std::env::args_os()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err((code, msg)) => {
            eprint!("{msg}");
            ExitCode::from(code as u8)
        }
    }
}
