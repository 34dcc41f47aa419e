use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{
    classify_invasion_with_threshold, detect_gap, front_indices, ExtremaTracker, GapReport, InvasionRegime, TailSpeed,
    WaveSpeedObserver,
};
use crate::error::{Error, Result};
use crate::mesh::aliasing_warning;
use crate::model::fkpp_minimal_speed;
use crate::scheme::{run, Observer, SimulationState};

use super::config::ScenarioConfig;
use super::initial_state;

/// Cells from either boundary at which the front triggers a warning.
const BOUNDARY_MARGIN: usize = 10;

/// Outcome of [`run_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub name: String,
    pub steps: usize,
    pub final_time: f64,
    pub cells: usize,
    pub classification: Option<InvasionRegime>,
    pub expected: Option<InvasionRegime>,
    pub residual_u: Option<f64>,
    pub gap: Option<GapReport<f64>>,
    pub tail_speed: Option<TailSpeed<f64>>,
    pub fkpp_speed: f64,
    /// Smallest value of `u`, `v`, `w` over all steps including the initial state.
    pub min_value: f64,
    /// Right interface of the last cell with `v >= 1/2` at the final time.
    pub front_position: Option<f64>,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
}

impl RunSummary {
    /// `key=value` lines in a fixed order. Floats use [`format_float`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        let opt = |x: Option<f64>| x.map_or("none".to_owned(), format_float);
        put("name", self.name.clone());
        put("steps", self.steps.to_string());
        put("final_time", format_float(self.final_time));
        put("cells", self.cells.to_string());
        put(
            "classification",
            self.classification.map_or("none", InvasionRegime::as_str).into(),
        );
        put("expected", self.expected.map_or("none", InvasionRegime::as_str).into());
        put("residual_u", opt(self.residual_u));
        match &self.gap {
            Some(g) => {
                put("gap_present", g.present.to_string());
                put("gap_left", format_float(g.left_edge));
                put("gap_right", format_float(g.right_edge));
                put("gap_width", format_float(g.width));
                put("gap_threshold", format_float(g.threshold));
            }
            None => put("gap_present", "none".into()),
        }
        put("tail_speed", opt(self.tail_speed.map(|t| t.mean)));
        put("tail_peak_to_peak", opt(self.tail_speed.map(|t| t.peak_to_peak)));
        put("fkpp_speed", format_float(self.fkpp_speed));
        put("min_value", format_float(self.min_value));
        put("front_position", opt(self.front_position));
        put("wall_time_s", format!("{:.3}", self.wall_time_s));
        put("warnings", self.warnings.len().to_string());
        for (i, w) in self.warnings.iter().enumerate() {
            put(&format!("warning.{}", i + 1), w.replace('\n', " "));
        }
        out
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `snapshot_t<time>.csv`, with the time in shortest round-trip form.
pub fn snapshot_file_name(time: f64) -> String {
    format!("snapshot_t{time}.csv")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_snapshot(path: &Path, s: &SimulationState<f64>) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "x,u,v,w").map_err(io)?;
    for (i, &x) in s.mesh.centers().iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            format_float(x),
            format_float(s.u[i]),
            format_float(s.v[i]),
            format_float(s.w[i])
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes `snapshot_t<time>.csv` at the step closest to each requested time.
struct SnapshotWriter {
    dir: PathBuf,
    pending: Vec<(usize, f64)>,
}

impl Observer<f64> for SnapshotWriter {
    fn observe(&mut self, step: usize, _prev: &SimulationState<f64>, cur: &SimulationState<f64>) -> Result<()> {
        for &(k, t) in &self.pending {
            if k == step {
                write_snapshot(&self.dir.join(snapshot_file_name(t)), cur)?;
            }
        }
        Ok(())
    }
}

/// Runs `cfg`, writing snapshots, `wavespeed.csv` and `summary.txt` into
/// `outdir` (created if missing).
pub fn run_scenario(cfg: &ScenarioConfig, outdir: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let started = Instant::now();
    let mesh = cfg.mesh()?;
    let opts = cfg.scheme_options()?;
    let s0 = initial_state(&cfg.initial, mesh.clone())?;

    let mut warnings = Vec::new();
    warnings.extend(opts.stability_warning(&cfg.params));
    warnings.extend(aliasing_warning(&cfg.profile, &mesh));
    let front_width = (cfg.params.diffusivity_ratio / cfg.params.r).sqrt();
    if front_width < cfg.dx {
        let msg = format!(
            "tumour front width sqrt(D/r) = {front_width:.3e} is below dx = {}; wave speeds are under-resolved",
            cfg.dx
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let steps = ((cfg.final_time / cfg.dt) - 1e-9).ceil().max(0.0) as usize;
    let mut snapshots = SnapshotWriter {
        dir: outdir.to_owned(),
        pending: cfg
            .snapshots
            .iter()
            .map(|&t| (((t / cfg.dt).round() as usize).min(steps), t))
            .collect(),
    };
    for &(k, t) in &snapshots.pending {
        if k == 0 {
            write_snapshot(&outdir.join(snapshot_file_name(t)), &s0)?;
        }
    }
    let mut extrema = ExtremaTracker::seeded(&s0);
    let mut speed = WaveSpeedObserver::tumour(cfg.tail_fraction)?;
    let last = {
        let mut observers: Vec<&mut dyn Observer<f64>> = vec![&mut snapshots, &mut extrema];
        if cfg.observers.wavespeed {
            observers.push(&mut speed);
        }
        run(s0, &cfg.profile, &cfg.params, &opts, cfg.final_time, &mut observers)?
    };

    let tail_speed = if cfg.observers.wavespeed {
        let series = speed.series();
        let path = outdir.join("wavespeed.csv");
        let mut w = create(&path)?;
        let io = |e| Error::io(&path, e);
        writeln!(w, "step,time,theta").map_err(io)?;
        for (k, (t, th)) in series.times().iter().zip(series.thetas()).enumerate() {
            writeln!(w, "{},{},{}", k + 1, format_float(*t), format_float(*th)).map_err(io)?;
        }
        w.flush().map_err(io)?;
        if series.is_empty() {
            None
        } else {
            Some(series.tail_speed()?)
        }
    } else {
        None
    };

    let n = mesh.len();
    let front = front_indices(&last);
    if extrema.max_front_index + BOUNDARY_MARGIN >= n || front.is_some_and(|(f, _)| f < BOUNDARY_MARGIN) {
        let msg = format!(
            "tumour front came within {BOUNDARY_MARGIN} cells of the domain boundary; speed estimates near the end are unreliable"
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let mut gap = if cfg.observers.gap {
        Some(detect_gap(&last, cfg.gap_threshold)?)
    } else {
        None
    };
    let (mut classification, mut residual_u) = (None, None);
    if cfg.observers.classification {
        match classify_invasion_with_threshold(&last, cfg.params.d, cfg.classification_tol, cfg.gap_threshold) {
            Ok(c) => {
                classification = Some(c.regime);
                residual_u = Some(c.residual_u);
                gap.get_or_insert(c.gap);
            }
            Err(e @ Error::Classification(_)) => {
                log::warn!("{e}");
                warnings.push(e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    if let (Some(got), Some(want)) = (classification, cfg.expected) {
        if got != want {
            let msg = format!("classified as {got}, preset expects {want}");
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }

    let summary = RunSummary {
        name: cfg.name.clone(),
        steps,
        final_time: last.time,
        cells: n,
        classification,
        expected: cfg.expected,
        residual_u,
        gap,
        tail_speed,
        fkpp_speed: fkpp_minimal_speed(cfg.params.r, cfg.params.diffusivity_ratio)?,
        min_value: extrema.min,
        front_position: front.map(|(f, _)| mesh.interfaces()[f + 1]),
        wall_time_s: started.elapsed().as_secs_f64(),
        warnings,
    };
    let path = outdir.join("summary.txt");
    fs::write(&path, summary.render()).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}
