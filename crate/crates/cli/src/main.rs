use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modvar_cli::emit::emit;
use modvar_cli::run::{apply_tolerances, run};
use modvar_cli::{parse_manifest, Experiment, Format, RunManifest};

#[derive(Parser)]
#[command(name = "modvar", version, about = "Modular-variable and weak-measurement experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML manifest with config, seed, output options and tolerance overrides.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Output directory (default: manifest `output.dir`, else `results`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed; overrides the manifest.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo batches and independent checks.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Two-slit gedanken experiment with a collective parity meter.
    Gedanken,
    /// Double Mach-Zehnder analog with weak which-arm plates.
    Mz,
    /// Phase independence of all moments while two lumps stay disjoint.
    Theorem1,
    /// Flatness of modular distributions for localized states.
    Flatness,
    /// Slit grating threaded by solenoid flux.
    Grating,
    /// Parity conservation and the two-body modular ellipse.
    Ellipse,
    /// Z(N) slit bases.
    Zn,
    /// Every acceptance check.
    Suite,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::Gedanken => Experiment::Gedanken,
            Command::Mz => Experiment::Mz,
            Command::Theorem1 => Experiment::Theorem1,
            Command::Flatness => Experiment::Flatness,
            Command::Grating => Experiment::Grating,
            Command::Ellipse => Experiment::Ellipse,
            Command::Zn => Experiment::Zn,
            Command::Suite => Experiment::Suite,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Runs the command; `Ok(pass)` on completion, `Err` for anything that prevented a result.
fn execute(cli: &Cli) -> Result<bool, String> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    let experiment = cli.command.experiment();
    let mut manifest = match &cli.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_manifest(&text, Some(experiment)).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunManifest::defaults(experiment),
    };
    if let Some(seed) = cli.seed {
        manifest = manifest.with_seed(seed);
    }
    if let Some(f) = cli.format {
        manifest.output.format = f;
    }
    let dir = cli.out.clone().or_else(|| manifest.output.dir.clone()).unwrap_or_else(|| PathBuf::from("results"));

    let mut result = run(&manifest).map_err(|e| e.to_string())?;
    let unmatched = apply_tolerances(&manifest, &mut result);
    if !unmatched.is_empty() {
        return Err(format!("tolerance override names no verdict: {}", unmatched.join(", ")));
    }
    if manifest.output.format.csv() && result.density.is_none() {
        eprintln!("note: {experiment} produces no density table; no CSV written");
    }
    let written = emit(&manifest, &result, &dir, manifest.output.format).map_err(|e| format!("{}: {e}", dir.display()))?;

    let failed: Vec<_> = result.failures().collect();
    println!("{experiment}: {} verdicts, {} failed", result.verdicts.len(), failed.len());
    for v in &failed {
        println!("  FAIL {} value {:e} tolerance {:e}", v.name, v.value, v.tolerance);
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(failed.is_empty())
}
