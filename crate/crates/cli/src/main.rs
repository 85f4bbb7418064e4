use std::process::ExitCode;

use clap::Parser;

use rank3_cli::{render, run_command, write_output, Cli};
use rank3_core::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli.command, cli.timings) {
        Ok(out) => {
            let text = render(&out.records, cli.format);
            if let Err(e) = write_output(&cli, &text) {
                eprintln!("rank3: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if out.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => match e {
            Error::InvalidParameter(_) | Error::UnknownConstant(_) => {
                eprintln!("rank3: {e}");
                eprintln!("run `rank3 --help` for usage");
                ExitCode::from(2)
            }
            other => {
                // A failed internal check: emit a machine-readable failure
                // record, exit 1.
                let record = serde_json::json!([{
                    "identity": "command-failure",
                    "pass": false,
                    "error": other.to_string(),
                }]);
                println!("{}", serde_json::to_string_pretty(&record).unwrap());
                ExitCode::from(1)
            }
        },
    }
}
