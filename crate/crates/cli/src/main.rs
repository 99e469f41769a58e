use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::Parser;

use fpinv::job::Command;
use fpinv::run::{echo_of, partial_payload};
use fpinv::{plain, run_job_with_progress, CliError, JobSpec, ResultDocument};
use fpinv_core::bsroots::TruncationSet;

/// Compute Frobenius-root invariants and Bernstein-Sato roots from a job file.
#[derive(Debug, Parser)]
#[command(name = "fpinv", version)]
struct Cli {
    /// Job file with `key = value` lines.
    jobfile: PathBuf,
    /// Print an aligned table instead of JSON.
    #[arg(long)]
    plain: bool,
    /// Override `e_max` for bs-roots and verify.
    #[arg(long, value_name = "N")]
    e_max: Option<u32>,
    /// Override the stable-exponent check depth.
    #[arg(long, value_name = "D")]
    depth: Option<u32>,
    /// Give up after this many seconds (exit 4, partial data where sound).
    #[arg(long, value_name = "S")]
    cap_seconds: Option<f64>,
    /// Include wall time in the document (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

enum Msg {
    Level(TruncationSet),
    Done(Box<Result<ResultDocument, CliError>>),
}

/// Apply command-line overrides; returns a warning for each one that the
/// command ignores.
fn apply_overrides(spec: &mut JobSpec, cli: &Cli) -> Vec<String> {
    let mut warnings = Vec::new();
    let command = spec.command.expect("parsed jobs have a command");
    if let Some(m) = cli.e_max {
        if matches!(command, Command::BsRoots | Command::Verify) {
            spec.e_max = Some(m);
        } else {
            warnings.push(format!("--e-max ignored by {command}"));
        }
    }
    if let Some(d) = cli.depth {
        if matches!(
            command,
            Command::TestIdeal | Command::Fjn | Command::StableExp | Command::Verify
        ) {
            spec.depth = Some(d);
        } else {
            warnings.push(format!("--depth ignored by {command}"));
        }
    }
    warnings
}

fn run_capped(spec: JobSpec, cap: Option<Duration>) -> Result<ResultDocument, CliError> {
    let Some(cap) = cap else {
        return run_job_with_progress(&spec, &mut |_| {});
    };
    let (tx, rx) = mpsc::channel();
    let worker_spec = spec.clone();
    thread::spawn(move || {
        let progress_tx = tx.clone();
        let out = run_job_with_progress(&worker_spec, &mut |s| {
            let _ = progress_tx.send(Msg::Level(s.clone()));
        });
        let _ = tx.send(Msg::Done(Box::new(out)));
    });
    let deadline = Instant::now() + cap;
    let mut levels = Vec::new();
    loop {
        let left = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok(Msg::Level(s)) => levels.push(s),
            Ok(Msg::Done(out)) => return *out,
            Err(_) => break,
        }
    }
    let message = format!("time cap of {}s reached", cap.as_secs_f64());
    let partial = match spec.command {
        Some(Command::BsRoots) | Some(Command::Verify) => Some(Box::new(ResultDocument {
            tool: "fpinv",
            version: env!("CARGO_PKG_VERSION"),
            job: echo_of(&spec)?,
            result: partial_payload(&levels),
            warnings: vec![format!(
                "{message} after {} complete truncation level(s); no roots claimed",
                levels.len()
            )],
            timing_ms: None,
        })),
        _ => None,
    };
    Err(CliError::Cap { message, partial })
}

fn emit(doc: &ResultDocument, plain_output: bool) {
    if plain_output {
        print!("{}", plain::render(doc));
    } else {
        print!("{}", doc.to_json());
    }
}

fn execute(cli: &Cli) -> Result<ResultDocument, CliError> {
    let text = std::fs::read_to_string(&cli.jobfile)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", cli.jobfile.display())))?;
    let mut spec = JobSpec::parse(&text)?;
    let notes = apply_overrides(&mut spec, cli);
    let cap = match cli.cap_seconds {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            return Err(CliError::Usage("--cap-seconds must be a positive number".into()))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let start = Instant::now();
    let mut doc = run_capped(spec, cap)?;
    doc.warnings.extend(notes);
    if cli.timing {
        doc.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("bad arguments")
                .trim_start_matches("error: ");
            let err = CliError::Usage(first.to_string());
            eprintln!("{}", err.reason());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            emit(&doc, cli.plain);
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let CliError::Cap { partial: Some(doc), .. } = &err {
                emit(doc, cli.plain);
            }
            eprintln!("{}", err.reason());
            // The worker may still be running; leave without joining it.
            std::process::exit(err.exit_code());
        }
    }
}
