use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use ggfv::analysis::{manufactured_convergence, HomogenizationTolerances};
use ggfv::scenarios::{
    format_float, homogenization_rows, preset, presets, run_homogenization_suite, run_scenario, speed_table,
    HomogenizationRow, Overrides, ScenarioConfig,
};
use ggfv::scheme::InterfaceAverage;
use ggfv::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

/// Finite-volume simulator for acid-mediated tumour invasion with
/// heterogeneous acid diffusion.
#[derive(Debug, Parser)]
#[command(name = "ggfv", version)]
struct Cli {
    #[command(flatten)]
    overrides: OverrideArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OverrideArgs {
    /// Time step.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Cell width.
    #[arg(long, global = true)]
    dx: Option<f64>,
    /// Final time.
    #[arg(long = "T", global = true, value_name = "T")]
    final_time: Option<f64>,
    /// Acid toxicity `d`.
    #[arg(long, global = true)]
    d: Option<f64>,
}

impl From<&OverrideArgs> for Overrides {
    fn from(a: &OverrideArgs) -> Self {
        Overrides {
            dt: a.dt,
            dx: a.dx,
            final_time: a.final_time,
            d: a.d,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a preset or a key=value configuration file.
    Simulate {
        /// Preset name or path to a configuration file.
        scenario: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print preset names with a one-line description.
    ListPresets,
    /// Compare periodic runs against their homogenized counterparts.
    Homogenize {
        /// `all`, or comma-separated row numbers 1..=12.
        #[arg(long, default_value = "all")]
        rows: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = HomogenizationTolerances::<f64>::default().tol_gap)]
        tol_gap: f64,
        #[arg(long, default_value_t = HomogenizationTolerances::<f64>::default().tol_osc)]
        tol_osc: f64,
    },
    /// Manufactured-solution order study for the acid diffusion stage.
    Convergence {
        /// Number of mesh halvings.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Cells on the coarsest mesh.
        #[arg(long, default_value_t = 16)]
        base_cells: usize,
        #[arg(long, default_value = "arithmetic")]
        interface_average: InterfaceAverage,
    },
    /// Tail wave speeds for a batch of presets.
    SpeedTable {
        /// Presets to run; defaults to the homogeneous-diffusion batch.
        presets: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(scenario: &str) -> Result<ScenarioConfig, Error> {
    let path = Path::new(scenario);
    if path.is_file() {
        ScenarioConfig::from_file(path)
    } else {
        preset(scenario)
    }
}

fn parse_rows(spec: &str) -> Result<Vec<HomogenizationRow>, Error> {
    let all = homogenization_rows();
    if spec.trim() == "all" {
        return Ok(all);
    }
    spec.split(',')
        .map(|t| {
            let k: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad row `{t}`; expected `all` or numbers 1..={}", all.len())))?;
            all.iter()
                .find(|r| r.index == k)
                .copied()
                .ok_or_else(|| Error::Config(format!("row {k} out of range 1..={}", all.len())))
        })
        .collect()
}

/// Runs the command and returns what it prints on success.
fn execute(cli: Cli) -> Result<String, Error> {
    let overrides = Overrides::from(&cli.overrides);
    let mut out = String::new();
    match cli.command {
        Command::Simulate { scenario, out: dir } => {
            let mut cfg = load(&scenario)?;
            cfg.apply_overrides(&overrides)?;
            let summary = run_scenario(&cfg, &dir)?;
            out.push_str(&summary.render());
        }
        Command::ListPresets => {
            for p in presets() {
                let _ = writeln!(out, "{}\t{}", p.name, p.description);
            }
        }
        Command::Homogenize {
            rows,
            out: dir,
            tol_gap,
            tol_osc,
        } => {
            let rows = parse_rows(&rows)?;
            let tol = HomogenizationTolerances { tol_gap, tol_osc };
            let table = run_homogenization_suite(&rows, &overrides, tol, Some(&dir))?;
            let _ = writeln!(out, "row,d,omega,alpha0,alpha1,pc,pc_gap,sin,sin_gap,matches");
            for r in &table {
                let pc = &r.piecewise_constant.verdict;
                let sin = &r.sinusoidal.verdict;
                let word = |h: bool| if h { "HOM" } else { "NO" };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{:.4},{},{:.4},{}",
                    r.row.index,
                    r.row.d,
                    r.row.omega,
                    r.row.alpha0,
                    r.row.alpha1,
                    word(pc.homogenized),
                    pc.relative_gap,
                    word(sin.homogenized),
                    sin.relative_gap,
                    r.matches_expected()
                );
            }
        }
        Command::Convergence {
            levels,
            base_cells,
            interface_average,
        } => {
            if overrides != Overrides::default() {
                log::warn!("--dt/--dx/--T/--d are ignored by the convergence study");
            }
            let study = manufactured_convergence::<f64>(base_cells, levels, interface_average)?;
            let _ = writeln!(out, "cells,dx,dt,steps,max_error,order");
            for (k, l) in study.levels.iter().enumerate() {
                let order = k
                    .checked_sub(1)
                    .map_or(String::new(), |j| format!("{:.6}", study.orders[j]));
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{order}",
                    l.cells,
                    format_float(l.dx),
                    format_float(l.dt),
                    l.steps,
                    format_float(l.max_error)
                );
            }
        }
        Command::SpeedTable {
            presets: names,
            out: dir,
        } => {
            let names = if names.is_empty() {
                ["table1-d0.5", "table1-d1.5", "table1-d2.5", "table1-d12.5"]
                    .map(String::from)
                    .to_vec()
            } else {
                names
            };
            let configs = names
                .iter()
                .map(|n| {
                    let mut c = load(n)?;
                    c.apply_overrides(&overrides)?;
                    Ok(c)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let _ = writeln!(out, "name,d,r,tail_speed,fkpp_speed");
            for e in speed_table(&configs, &dir)? {
                let tail = e.tail.map_or("none".into(), |t| format_float(t.mean));
                let _ = writeln!(out, "{},{},{},{tail},{}", e.name, e.d, e.r, format_float(e.fkpp_speed));
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    match execute(cli) {
        Ok(text) => {
            // A closed pipe on stdout is not a failure of the run.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_CONFIG })
        }
    }
}
