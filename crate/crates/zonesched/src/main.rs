use std::process::ExitCode;

fn main() -> ExitCode {
    zonesched::cli::run()
}
