use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_bits = std::env::var(theta_atlas::PREC_ENV).ok();
    let out = theta_atlas::dispatch(std::env::args_os(), env_bits.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
