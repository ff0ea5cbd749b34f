use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = hnkit_cli::run(std::env::args().collect());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
