mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{merged_args, Cli, Command, Job};
use commands::{Failure, Outcome};

const OUT_DIR_VAR: &str = "ANHARMONIC_OUT_DIR";

fn destination(job: &Job, command: &str) -> Option<PathBuf> {
    if let Some(p) = &job.output {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_VAR).filter(|d| !d.is_empty())?;
    Some(PathBuf::from(dir).join(format!("{command}.{}", job.format.extension())))
}

fn emit(job: &Job, command: &str, outcome: &Outcome) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Run(e.to_string());
    let mut out: Box<dyn Write> = match destination(job, command) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io_err)?;
            }
            Box::new(BufWriter::new(File::create(&path).map_err(io_err)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    outcome.table.write(job.format, !job.no_meta, &mut out).map_err(|e| Failure::Run(e.to_string()))?;
    out.flush().map_err(io_err)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let job = cli.command.job();
    let outcome = match &cli.command {
        Command::Solve(j) => commands::solve(j),
        Command::Scan(j) => commands::scan(j),
        Command::Table1(j) => commands::tables1(j),
        Command::Table2(j) => commands::tables2(j),
        Command::Oracle(j) => commands::oracle(j),
        Command::Compare(j) => commands::compare(j),
    }?;
    emit(job, cli.command.name(), &outcome)?;
    Ok(outcome.failed)
}

fn main() -> ExitCode {
    let argv = match merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: some levels failed or exceeded the tolerance; see the output rows");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
