//! `cv2x-dos` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 failed validation.
//! `--seed` overrides `base_seed` from the config (default 0).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis;
use crate::engine::{run_experiment, run_sweep, ExperimentResult};
use crate::io;
use crate::validate;

#[derive(Debug, Parser)]
#[command(name = "cv2x-dos", version, about = "Resource-block selection attacks on C-V2X Mode 4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment point from a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Results CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Time/resource-block trace of the first trial.
        #[arg(long)]
        utilization: Option<PathBuf>,
    },
    /// Run a figure preset end to end.
    Sweep {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a closed-form value.
    Analyze {
        quantity: Quantity,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        pprime: Option<f64>,
        #[arg(long)]
        nr: Option<usize>,
        #[arg(long)]
        na: Option<u32>,
    },
    /// Run the oracle suite.
    Validate {
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Quantity {
    /// Stationary collision probability of one target and one oblivious attacker.
    Pi1,
    /// Its derivative with respect to p'.
    Dpi1,
    /// Jam probability of a static target.
    Jamprob,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Validation,
}

/// Plain decimal with `sig` significant digits, exponent form outside
/// `[1e-6, 1e15)`.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&magnitude) {
        return format!("{:.*e}", sig - 1, x);
    }
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn need<T>(value: Option<T>, flag: &str, quantity: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("`analyze {quantity}` requires --{flag}")))
}

fn simulate<W: Write>(
    config: &Path,
    seed: Option<u64>,
    out: Option<&Path>,
    utilization: Option<&Path>,
    stdout: &mut W,
) -> Result<(), Failure> {
    let text = fs::read_to_string(config)
        .map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    let mut cfg = io::parse_config(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    if let Some(seed) = seed {
        cfg.base_seed = seed;
    }
    cfg.record_utilization |= utilization.is_some();
    let result = run_experiment(&cfg).map_err(|e| Failure::Input(e.to_string()))?;
    let csv = io::write_results_csv(std::slice::from_ref(&result));
    match out {
        Some(path) => write_file(path, &csv)?,
        None => stdout.write_all(csv.as_bytes()).map_err(|e| Failure::Input(e.to_string()))?,
    }
    if let Some(path) = utilization {
        let trace = result.utilization.as_deref().unwrap_or_default();
        write_file(path, &io::write_utilization_csv(trace))?;
    }
    Ok(())
}

fn sweep<W: Write>(name: &str, seed: Option<u64>, out: &Path, stdout: &mut W) -> Result<(), Failure> {
    let preset = io::preset(name).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut results: Vec<ExperimentResult> = Vec::new();
    for series in &preset.series {
        let mut base = series.base.clone();
        if let Some(seed) = seed {
            base.base_seed = seed;
        }
        let points = run_sweep(&base, series.axis, &series.values)
            .map_err(|e| Failure::Input(format!("{}: {e}", series.label)))?;
        results.extend(points.into_iter().map(|p| p.result));
    }
    write_file(out, &io::write_results_csv(&results))?;
    let _ = writeln!(
        stdout,
        "{}: {} ({} rows) -> {}",
        preset.name,
        preset.description,
        results.len(),
        out.display()
    );
    Ok(())
}

fn analyze<W: Write>(
    quantity: Quantity,
    p: Option<f64>,
    pprime: Option<f64>,
    nr: Option<usize>,
    na: Option<u32>,
    stdout: &mut W,
) -> Result<(), Failure> {
    let value = match quantity {
        Quantity::Pi1 | Quantity::Dpi1 => {
            let name = if matches!(quantity, Quantity::Pi1) { "pi1" } else { "dpi1" };
            let p = need(p, "p", name)?;
            let q = need(pprime, "pprime", name)?;
            let nr = need(nr, "nr", name)?;
            for (flag, v) in [("p", p), ("pprime", q)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Failure::Usage(format!("--{flag} must lie in [0, 1], got {v}")));
                }
            }
            let r = if matches!(quantity, Quantity::Pi1) {
                analysis::stationary_pi1(p, q, nr)
            } else {
                analysis::pi1_derivative(p, q, nr)
            };
            r.map_err(|e| Failure::Input(e.to_string()))?
        }
        Quantity::Jamprob => {
            let nr = need(nr, "nr", "jamprob")?;
            let na = need(na, "na", "jamprob")?;
            if nr == 0 {
                return Err(Failure::Usage("--nr must be positive".into()));
            }
            analysis::static_target_jam_prob(nr, na)
        }
    };
    let _ = writeln!(stdout, "{}", format_significant(value, 12));
    Ok(())
}

fn run_validate<W: Write>(fast: bool, stdout: &mut W) -> Result<(), Failure> {
    let checks = validate::run_checks(fast);
    for c in &checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        let _ = writeln!(stdout, "{verdict}  {}  [{}]", c.name, c.detail);
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

/// Entry point; `args` includes the program name.
pub fn run_cli<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    1
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Simulate { config, seed, out, utilization } => {
            simulate(config, *seed, out.as_deref(), utilization.as_deref(), stdout)
        }
        Command::Sweep { preset, seed, out } => sweep(preset, *seed, out, stdout),
        Command::Analyze { quantity, p, pprime, nr, na } => {
            analyze(*quantity, *p, *pprime, *nr, *na, stdout)
        }
        Command::Validate { fast } => run_validate(*fast, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            let _ = writeln!(
                stderr,
                "usage: cv2x-dos simulate --config <path> [--seed <u64>] [--out <path>] [--utilization <path>]\n       \
                 cv2x-dos sweep --preset <name> [--seed <u64>] --out <path>\n       \
                 cv2x-dos analyze pi1|dpi1|jamprob --p <f> --pprime <f> --nr <n> [--na <n>]\n       \
                 cv2x-dos validate [--fast]"
            );
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Validation) => 2,
    }
}
