use std::process::ExitCode;

fn main() -> ExitCode {
    binloc::cli::main_with(std::env::args().skip(1).collect())
}
