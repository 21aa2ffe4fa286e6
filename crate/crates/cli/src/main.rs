use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match jc_entangle::parse_args(std::env::args_os()) {
        Ok(config) => config,
        Err(err) => err.exit(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match jc_entangle::run(&config, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(err) => {
            let _ = out.flush();
            eprintln!("jc-entangle: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
