use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::analysis::{homogenization_compare, HomogenizationTolerances, HomogenizationVerdict, SpeedRun, TailSpeed};
use crate::error::{Error, Result};
use crate::mesh::DiffusionProfile;

use super::config::{Overrides, ScenarioConfig};
use super::output::{format_float, run_scenario};
use super::{initial_state, RunSummary};

/// Periodic coefficient family of a homogenization comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFamily {
    /// Two-valued, `β = 1/2`, with `ω/2` periods per unit length.
    PiecewiseConstant,
    Sinusoidal,
}

impl ProfileFamily {
    pub fn tag(self) -> &'static str {
        match self {
            Self::PiecewiseConstant => "pc",
            Self::Sinusoidal => "sin",
        }
    }
}

/// One line of the homogenization benchmark with its reference verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizationRow {
    /// 1-based position in [`homogenization_rows`].
    pub index: usize,
    pub d: f64,
    pub omega: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub expected_pc: bool,
    pub expected_sin: bool,
}

impl HomogenizationRow {
    pub fn profile(&self, family: ProfileFamily) -> Result<DiffusionProfile<f64>> {
        match family {
            ProfileFamily::PiecewiseConstant => {
                DiffusionProfile::periodic_piecewise_constant(self.alpha0, self.alpha1, 0.5, self.omega / 2.0)
            }
            ProfileFamily::Sinusoidal => DiffusionProfile::sinusoidal(self.alpha0, self.alpha1, self.omega),
        }
    }

    pub fn preset_name(&self, family: ProfileFamily) -> String {
        format!("table3-row{:02}-{}", self.index, family.tag())
    }

    /// Baseline run with this row's `d` and periodic coefficient.
    pub fn config(&self, family: ProfileFamily) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::baseline(&self.preset_name(family), self.d)?;
        cfg.profile = self.profile(family)?;
        cfg.description = format!(
            "{} A in [{}, {}], omega = {}, d = {}",
            match family {
                ProfileFamily::PiecewiseConstant => "piecewise-constant",
                ProfileFamily::Sinusoidal => "sinusoidal",
            },
            self.alpha0,
            self.alpha1,
            self.omega,
            self.d
        );
        Ok(cfg)
    }
}

/// The twelve benchmark rows; `true` marks a homogenized verdict.
pub fn homogenization_rows() -> Vec<HomogenizationRow> {
    // Only the strongly heterogeneous block has NO verdicts.
    let strong = [(false, false), (false, false), (false, true), (true, true)];
    let mut rows = Vec::new();
    for (b, (omega, alpha0, alpha1)) in [(100.0, 0.01, 1.0), (50.0, 0.95, 1.0), (50.0, 0.4, 0.6)]
        .into_iter()
        .enumerate()
    {
        for (k, d) in [0.5, 1.5, 30.0, 60.0].into_iter().enumerate() {
            let (expected_pc, expected_sin) = if b == 0 { strong[k] } else { (true, true) };
            rows.push(HomogenizationRow {
                index: rows.len() + 1,
                d,
                omega,
                alpha0,
                alpha1,
                expected_pc,
                expected_sin,
            });
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyVerdict {
    pub family: ProfileFamily,
    pub verdict: HomogenizationVerdict<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictRow {
    pub row: HomogenizationRow,
    pub piecewise_constant: FamilyVerdict,
    pub sinusoidal: FamilyVerdict,
}

impl VerdictRow {
    pub fn matches_expected(&self) -> bool {
        self.piecewise_constant.verdict.homogenized == self.row.expected_pc
            && self.sinusoidal.verdict.homogenized == self.row.expected_sin
    }
}

fn word(h: bool) -> &'static str {
    if h {
        "HOM"
    } else {
        "NO"
    }
}

fn compare(cfg: &ScenarioConfig, tol: HomogenizationTolerances<f64>) -> Result<HomogenizationVerdict<f64>> {
    cfg.validate()?;
    let spec = SpeedRun {
        initial: initial_state(&cfg.initial, cfg.mesh()?)?,
        params: cfg.params,
        opts: cfg.scheme_options()?,
        final_time: cfg.final_time,
        tail_fraction: cfg.tail_fraction,
    };
    homogenization_compare(&spec, &cfg.profile, tol)
}

/// Runs every selected row for both families concurrently and, when `outdir`
/// is given, writes `homogenization.csv` plus one `rowNN/summary.txt` per
/// row.
pub fn run_homogenization_suite(
    rows: &[HomogenizationRow],
    overrides: &Overrides,
    tol: HomogenizationTolerances<f64>,
    outdir: Option<&Path>,
) -> Result<Vec<VerdictRow>> {
    let table = rows
        .par_iter()
        .map(|row| {
            let run_family = |family| -> Result<FamilyVerdict> {
                let mut cfg = row.config(family)?;
                cfg.apply_overrides(overrides)?;
                Ok(FamilyVerdict {
                    family,
                    verdict: compare(&cfg, tol)?,
                })
            };
            let (pc, sin) = rayon::join(
                || run_family(ProfileFamily::PiecewiseConstant),
                || run_family(ProfileFamily::Sinusoidal),
            );
            let out = VerdictRow {
                row: *row,
                piecewise_constant: pc?,
                sinusoidal: sin?,
            };
            if let Some(dir) = outdir {
                let sub = dir.join(format!("row{:02}", row.index));
                fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
                let path = sub.join("summary.txt");
                fs::write(&path, render_row(&out)).map_err(|e| Error::io(&path, e))?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(dir) = outdir {
        let path = dir.join("homogenization.csv");
        fs::write(&path, render_table(&table)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(table)
}

fn render_row(r: &VerdictRow) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "row={}", r.row.index);
    let _ = writeln!(out, "d={:?}", r.row.d);
    let _ = writeln!(out, "omega={:?}", r.row.omega);
    let _ = writeln!(out, "alpha0={:?}", r.row.alpha0);
    let _ = writeln!(out, "alpha1={:?}", r.row.alpha1);
    for fv in [&r.piecewise_constant, &r.sinusoidal] {
        let v = &fv.verdict;
        let t = fv.family.tag();
        let _ = writeln!(
            out,
            "{t}.effective_diffusivity={}",
            format_float(v.effective_diffusivity)
        );
        let _ = writeln!(out, "{t}.theta_periodic_tail={}", format_float(v.theta_periodic_tail));
        let _ = writeln!(out, "{t}.theta_effective_tail={}", format_float(v.theta_effective_tail));
        let _ = writeln!(out, "{t}.relative_gap={}", format_float(v.relative_gap));
        let _ = writeln!(
            out,
            "{t}.oscillation_amplitude={}",
            format_float(v.oscillation_amplitude)
        );
        let _ = writeln!(out, "{t}.verdict={}", word(v.homogenized));
    }
    out
}

/// Verdict table with columns `d,omega,alpha0,alpha1,piecewise_constant,sinusoidal`.
pub(crate) fn render_table(rows: &[VerdictRow]) -> String {
    let mut out = String::from("d,omega,alpha0,alpha1,piecewise_constant,sinusoidal\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{:?},{},{}",
            r.row.d,
            r.row.omega,
            r.row.alpha0,
            r.row.alpha1,
            word(r.piecewise_constant.verdict.homogenized),
            word(r.sinusoidal.verdict.homogenized)
        );
    }
    out
}

/// One line of [`speed_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedTableEntry {
    pub name: String,
    pub d: f64,
    pub r: f64,
    pub tail: Option<TailSpeed<f64>>,
    pub fkpp_speed: f64,
    pub summary: RunSummary,
}

/// Runs the given scenarios concurrently, each into `outdir/<name>/`, and
/// collects their tail speeds. Writes `speed_table.csv` into `outdir`.
pub fn speed_table(configs: &[ScenarioConfig], outdir: &Path) -> Result<Vec<SpeedTableEntry>> {
    let entries = configs
        .par_iter()
        .map(|cfg| {
            let summary = run_scenario(cfg, &outdir.join(&cfg.name))?;
            Ok(SpeedTableEntry {
                name: cfg.name.clone(),
                d: cfg.params.d,
                r: cfg.params.r,
                tail: summary.tail_speed,
                fkpp_speed: summary.fkpp_speed,
                summary,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("name,d,r,tail_speed,tail_peak_to_peak,fkpp_speed\n");
    for e in &entries {
        let tail = |f: fn(&TailSpeed<f64>) -> f64| e.tail.as_ref().map_or("none".into(), |t| format_float(f(t)));
        let _ = writeln!(
            csv,
            "{},{:?},{:?},{},{},{}",
            e.name,
            e.d,
            e.r,
            tail(|t| t.mean),
            tail(|t| t.peak_to_peak),
            format_float(e.fkpp_speed)
        );
    }
    let path = outdir.join("speed_table.csv");
    fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    Ok(entries)
}
