use std::io::Write;
use std::process;

use clap::Parser;

use capmon::cli::Cli;
use capmon::error::CliError;
use capmon::run;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; anything else is a
            // usage error and follows the stderr JSON contract.
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    // Tolerate a closed pipe (help piped into a pager).
                    let _ = write!(std::io::stdout(), "{e}");
                    process::exit(0);
                }
                _ => {
                    CliError::validation("invalid_args", e.render()).emit();
                    process::exit(2);
                }
            }
        }
    };
    if let Err(e) = run::run(cli) {
        e.emit();
        process::exit(e.exit_code);
    }
}
