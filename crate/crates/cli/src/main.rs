use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::builder::PossibleValuesParser;
use clap::Parser;
use frontlab::config::{parse_config, ExperimentKind};
use frontlab::experiment::{exit_code_for, run_experiment, REPORT_FILE};

/// Free boundary reaction-diffusion experiments driven by a TOML run config.
#[derive(Debug, Parser)]
#[command(name = "frontlab", version)]
struct Cli {
    /// Experiment kind; the config's `kind` wins on mismatch.
    #[arg(value_parser = PossibleValuesParser::new(ExperimentKind::ALL.map(|k| k.name())))]
    kind: String,

    /// Run config (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Output directory; the config's `out_dir` wins on mismatch.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Probe threads for sigma-star and fit-speed; `sigma_star.workers` wins on mismatch.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    // usage errors exit 1; 2 is reserved for scientific failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<frontlab::Error>()
                .map_or(1, |fe| exit_code_for(fe) as u8);
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let mut cfg = parse_config(&cli.config).with_context(|| format!("reading {}", cli.config.display()))?;

    let kind = ExperimentKind::from_name(&cli.kind).expect("clap restricts the kind");
    if kind != cfg.kind {
        eprintln!(
            "warning: command line asks for `{kind}`, config says `{}`; using the config",
            cfg.kind
        );
    }
    let out_dir = match (&cfg.out_dir, &cli.out) {
        (Some(c), Some(o)) => {
            if std::path::Path::new(c) != o {
                eprintln!(
                    "warning: --out {} differs from out_dir = {c}; using the config",
                    o.display()
                );
            }
            PathBuf::from(c)
        }
        (Some(c), None) => PathBuf::from(c),
        (None, Some(o)) => o.clone(),
        (None, None) => PathBuf::from(format!("out-{}", cfg.kind)),
    };
    match (cfg.sigma_star.workers, cli.workers) {
        (Some(c), Some(w)) if c != w => {
            eprintln!("warning: --workers {w} differs from sigma_star.workers = {c}; using the config");
        }
        (None, Some(w)) => cfg.sigma_star.workers = Some(w),
        _ => {}
    }

    let outcome = run_experiment(&cfg, &out_dir).with_context(|| format!("writing to {}", out_dir.display()))?;
    let report = std::fs::read_to_string(out_dir.join(REPORT_FILE))?;
    print!("{report}");
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    Ok(outcome.exit_code as u8)
}
