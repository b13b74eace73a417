mod args;
mod commands;
mod input;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    if let Some(j) = g.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command, g) {
        Ok(mut report) => {
            if g.deterministic {
                output::strip_timing(&mut report.value);
                report.stream.iter_mut().for_each(output::strip_timing);
            }
            // A closed pipe is not an error worth reporting.
            let _ = emit(&report, g.format);
            match report.status {
                Status::Positive => ExitCode::SUCCESS,
                Status::Negative => ExitCode::from(1),
                Status::Capped => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap() { 3 } else { 2 })
        }
    }
}

fn emit(report: &commands::Report, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if format == Format::Json && !report.stream.is_empty() {
        for line in &report.stream {
            writeln!(out, "{line}")?;
        }
        writeln!(out, "{}", report.value)?;
    } else {
        for line in &report.stream {
            writeln!(out, "{}", output::render(line, "found:", format))?;
        }
        writeln!(out, "{}", output::render(&report.value, &report.headline, format))?;
    }
    out.flush()
}
