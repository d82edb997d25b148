mod args;
mod report;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use report::{Report, Summary};
use run::{parse_battery, run_battery, run_command};

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::JsonLines => println!("{}", report.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Battery { file } => parse_battery(file).map(|cmds| {
            let reports = run_battery(&cmds);
            for r in &reports {
                emit(r, cli.format);
            }
            let summary = Summary::of(&reports);
            match cli.format {
                Format::Text => print!("{}", summary.to_text()),
                Format::JsonLines => println!("{}", summary.to_json()),
            }
            summary.failed == 0
        }),
        cmd => run_command(cmd).map(|r| {
            emit(&r, cli.format);
            r.ok
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
