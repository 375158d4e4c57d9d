use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = ckhopf_cli::run(std::env::args_os());
    let result = if code == 2 {
        std::io::stderr().write_all(out.as_bytes())
    } else {
        std::io::stdout().write_all(out.as_bytes())
    };
    if result.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
