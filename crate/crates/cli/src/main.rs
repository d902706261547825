use std::process::ExitCode;

use clap::Parser;
use edgewl_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("values serialize"));
            } else {
                println!("{}", report.human);
            }
            match report.violation {
                Some(msg) => {
                    eprintln!("edgewl: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("edgewl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
