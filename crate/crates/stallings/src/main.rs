use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use stallings::cli::{run, JobSpec};

fn main() -> ExitCode {
    let job = JobSpec::parse();
    match run(&job) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.stderr.is_empty() {
                let _ = write!(std::io::stderr(), "{}", out.stderr);
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
