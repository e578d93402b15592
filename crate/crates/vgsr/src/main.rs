use std::process::ExitCode;

fn main() -> ExitCode {
    vgsr::cli::main()
}
