use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    powerweight::cli::init_logging();
    let code = powerweight::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
