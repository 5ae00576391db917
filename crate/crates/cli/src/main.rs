use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use oscillax_cli::{error_payload, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = outcome.render(cli.common.format);
            let written = match &cli.common.output {
                Some(path) => fs::write(path, rendered).map_err(|e| CliError::Io(path.clone(), e)),
                None => std::io::stdout()
                    .write_all(rendered.as_bytes())
                    .map_err(|e| CliError::Io("<stdout>".into(), e)),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if outcome.failed {
                eprintln!("verification failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", error_payload(&e));
            ExitCode::from(e.exit_code())
        }
    }
}
