use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::analysis::{InvasionRegime, DEFAULT_CLASSIFICATION_TOL, DEFAULT_GAP_THRESHOLD, DEFAULT_TAIL_FRACTION};
use crate::error::{Error, Result};
use crate::mesh::{DiffusionProfile, Mesh};
use crate::model::ModelParameters;
use crate::scheme::{InterfaceAverage, SchemeOptions};

/// Shape of the initial tumour profile. Breakpoints are absolute coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialKind {
    /// `v = 1` left of `jump`, `0` right of it.
    Riemann { jump: f64 },
    /// `v = 1` up to `core_end`, linear down to `0` at `ramp_end`.
    PiecewiseLinear { core_end: f64, ramp_end: f64 },
}

impl InitialKind {
    /// Jump at a quarter of the domain.
    pub fn riemann(xmin: f64, xmax: f64) -> Self {
        Self::Riemann {
            jump: xmin + 0.25 * (xmax - xmin),
        }
    }

    /// Core up to `L/8`, ramp to `3L/8`.
    pub fn piecewise_linear(xmin: f64, xmax: f64) -> Self {
        let l = xmax - xmin;
        Self::PiecewiseLinear {
            core_end: xmin + l / 8.0,
            ramp_end: xmin + 3.0 * l / 8.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Riemann { .. } => "riemann",
            Self::PiecewiseLinear { .. } => "piecewise_linear",
        }
    }
}

/// Which diagnostics a run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObserverFlags {
    pub wavespeed: bool,
    pub gap: bool,
    pub classification: bool,
}

impl Default for ObserverFlags {
    fn default() -> Self {
        Self {
            wavespeed: true,
            gap: true,
            classification: true,
        }
    }
}

/// Command-line overrides applied on top of a configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub dx: Option<f64>,
    pub final_time: Option<f64>,
    pub d: Option<f64>,
}

/// One simulation: model, coefficient, initial data, grid and outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub params: ModelParameters<f64>,
    pub profile: DiffusionProfile<f64>,
    pub initial: InitialKind,
    pub xmin: f64,
    pub xmax: f64,
    pub dx: f64,
    pub dt: f64,
    pub final_time: f64,
    /// Times at which `snapshot_t<time>.csv` is written.
    pub snapshots: Vec<f64>,
    pub observers: ObserverFlags,
    pub interface_average_w: InterfaceAverage,
    pub gap_threshold: f64,
    pub classification_tol: f64,
    pub tail_fraction: f64,
    /// Regime the scenario is expected to show, if known.
    pub expected: Option<InvasionRegime>,
}

impl ScenarioConfig {
    /// Homogeneous-diffusion baseline on `[0, 1]`: `r = 1`, `D = 4e-5`,
    /// `c = 70`, `A = 1`, `Δx = 0.005`, `Δt = 0.01`, `T = 20`.
    pub fn baseline(name: &str, d: f64) -> Result<Self> {
        Ok(Self {
            name: name.to_owned(),
            description: String::new(),
            params: ModelParameters::new(d, 1.0, 4e-5, 70.0)?,
            profile: DiffusionProfile::constant(1.0)?,
            initial: InitialKind::piecewise_linear(0.0, 1.0),
            xmin: 0.0,
            xmax: 1.0,
            dx: 0.005,
            dt: 0.01,
            final_time: 20.0,
            snapshots: vec![0.0, 20.0],
            observers: ObserverFlags::default(),
            interface_average_w: InterfaceAverage::Arithmetic,
            gap_threshold: DEFAULT_GAP_THRESHOLD,
            classification_tol: DEFAULT_CLASSIFICATION_TOL,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            expected: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        ModelParameters::new(p.d, p.r, p.diffusivity_ratio, p.c)?;
        self.profile.validate()?;
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {x} must be finite and > 0")))
            }
        };
        positive("T", self.final_time)?;
        positive("dt", self.dt)?;
        positive("dx", self.dx)?;
        if !(self.xmax > self.xmin) {
            return Err(Error::Config(format!("domain [{}, {}] is empty", self.xmin, self.xmax)));
        }
        self.mesh()?;
        if let Some(t) = self.snapshots.iter().find(|&&t| !(0.0..=self.final_time).contains(&t)) {
            return Err(Error::Config(format!(
                "snapshot time {t} lies outside [0, {}]",
                self.final_time
            )));
        }
        if !(self.gap_threshold > 0.0 && self.gap_threshold < 0.5) {
            return Err(Error::Config(format!(
                "gap_threshold = {} must lie in (0, 0.5)",
                self.gap_threshold
            )));
        }
        positive("classification_tol", self.classification_tol)?;
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "tail_fraction = {} must lie in (0, 1]",
                self.tail_fraction
            )));
        }
        if let DiffusionProfile::SingleJump { x_jump, .. } = self.profile {
            if !(x_jump >= self.xmin && x_jump <= self.xmax) {
                return Err(Error::Config(format!("x_jump = {x_jump} lies outside the domain")));
            }
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Arc<Mesh<f64>>> {
        Ok(Arc::new(Mesh::uniform(self.xmin, self.xmax, self.dx)?))
    }

    pub fn scheme_options(&self) -> Result<SchemeOptions<f64>> {
        SchemeOptions::new(self.dt, self.interface_average_w)
    }

    pub fn apply_overrides(&mut self, o: &Overrides) -> Result<()> {
        if let Some(dt) = o.dt {
            self.dt = dt;
        }
        if let Some(dx) = o.dx {
            self.dx = dx;
        }
        if let Some(t) = o.final_time {
            self.final_time = t;
            self.snapshots.retain(|&s| s <= t);
        }
        if let Some(d) = o.d {
            self.params.d = d;
        }
        self.validate()
    }

    /// Flat `key=value` text, one entry per line, in a fixed order. Floats
    /// use the shortest representation that parses back to the same value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        put("name", self.name.clone());
        put("description", self.description.clone());
        put("d", f(self.params.d));
        put("r", f(self.params.r));
        put("D", f(self.params.diffusivity_ratio));
        put("c", f(self.params.c));
        match self.profile {
            DiffusionProfile::Constant { a } => {
                put("profile", "constant".into());
                put("a", f(a));
            }
            DiffusionProfile::SingleJump { a1, a2, x_jump } => {
                put("profile", "single_jump".into());
                put("a1", f(a1));
                put("a2", f(a2));
                put("x_jump", f(x_jump));
            }
            DiffusionProfile::PeriodicPiecewiseConstant {
                alpha0,
                alpha1,
                beta,
                epsilon,
            } => {
                put("profile", "periodic_piecewise_constant".into());
                put("alpha0", f(alpha0));
                put("alpha1", f(alpha1));
                put("beta", f(beta));
                put("epsilon", f(epsilon));
            }
            DiffusionProfile::Sinusoidal { alpha0, alpha1, omega } => {
                put("profile", "sinusoidal".into());
                put("alpha0", f(alpha0));
                put("alpha1", f(alpha1));
                put("omega", f(omega));
            }
        }
        put("initial", self.initial.name().into());
        match self.initial {
            InitialKind::Riemann { jump } => put("jump", f(jump)),
            InitialKind::PiecewiseLinear { core_end, ramp_end } => {
                put("core_end", f(core_end));
                put("ramp_end", f(ramp_end));
            }
        }
        put("xmin", f(self.xmin));
        put("xmax", f(self.xmax));
        put("dx", f(self.dx));
        put("dt", f(self.dt));
        put("T", f(self.final_time));
        put(
            "snapshots",
            self.snapshots.iter().map(|&t| f(t)).collect::<Vec<_>>().join(","),
        );
        put("observe_wavespeed", self.observers.wavespeed.to_string());
        put("observe_gap", self.observers.gap.to_string());
        put("observe_classification", self.observers.classification.to_string());
        put("interface_average_w", self.interface_average_w.as_str().into());
        put("gap_threshold", f(self.gap_threshold));
        put("classification_tol", f(self.classification_tol));
        put("tail_fraction", f(self.tail_fraction));
        put("expected", self.expected.map_or("none", InvasionRegime::as_str).into());
        out
    }

    /// Parses the format written by [`render`](Self::render). Blank lines and
    /// lines starting with `#` are skipped; `d` is required, every other key
    /// falls back to the baseline. Unknown, duplicate or inapplicable keys
    /// are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got `{line}`", lineno + 1)))?;
            let k = k.trim().to_owned();
            if map.insert(k.clone(), v.trim().to_owned()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
        }
        let mut kv = Fields(map);

        let d = kv
            .float("d")?
            .ok_or_else(|| Error::Config("missing required key `d`".into()))?;
        let mut cfg = Self::baseline("custom", d)?;
        if let Some(name) = kv.take("name") {
            cfg.name = name;
        }
        if let Some(desc) = kv.take("description") {
            cfg.description = desc;
        }
        let r = kv.float("r")?.unwrap_or(cfg.params.r);
        let dd = kv.float("D")?.unwrap_or(cfg.params.diffusivity_ratio);
        let c = kv.float("c")?.unwrap_or(cfg.params.c);
        cfg.params = ModelParameters::new(d, r, dd, c)?;

        cfg.xmin = kv.float("xmin")?.unwrap_or(cfg.xmin);
        cfg.xmax = kv.float("xmax")?.unwrap_or(cfg.xmax);
        let (xmin, xmax) = (cfg.xmin, cfg.xmax);

        let profile = kv.take("profile").unwrap_or_else(|| "constant".into());
        cfg.profile = match profile.as_str() {
            "constant" => DiffusionProfile::constant(kv.float("a")?.unwrap_or(1.0))?,
            "single_jump" => DiffusionProfile::single_jump(
                kv.required("a1")?,
                kv.required("a2")?,
                kv.float("x_jump")?.unwrap_or(xmin + 0.625 * (xmax - xmin)),
            )?,
            "periodic_piecewise_constant" => DiffusionProfile::periodic_piecewise_constant(
                kv.required("alpha0")?,
                kv.required("alpha1")?,
                kv.float("beta")?.unwrap_or(0.5),
                kv.required("epsilon")?,
            )?,
            "sinusoidal" => {
                DiffusionProfile::sinusoidal(kv.required("alpha0")?, kv.required("alpha1")?, kv.required("omega")?)?
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown profile `{other}` (expected constant|single_jump|periodic_piecewise_constant|sinusoidal)"
                )))
            }
        };

        let initial = kv.take("initial").unwrap_or_else(|| "piecewise_linear".into());
        cfg.initial = match initial.as_str() {
            "riemann" => {
                let InitialKind::Riemann { jump } = InitialKind::riemann(xmin, xmax) else {
                    unreachable!()
                };
                InitialKind::Riemann {
                    jump: kv.float("jump")?.unwrap_or(jump),
                }
            }
            "piecewise_linear" => {
                let InitialKind::PiecewiseLinear { core_end, ramp_end } = InitialKind::piecewise_linear(xmin, xmax)
                else {
                    unreachable!()
                };
                InitialKind::PiecewiseLinear {
                    core_end: kv.float("core_end")?.unwrap_or(core_end),
                    ramp_end: kv.float("ramp_end")?.unwrap_or(ramp_end),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown initial profile `{other}` (expected riemann|piecewise_linear)"
                )))
            }
        };

        cfg.dx = kv.float("dx")?.unwrap_or(cfg.dx);
        cfg.dt = kv.float("dt")?.unwrap_or(cfg.dt);
        cfg.final_time = kv.float("T")?.unwrap_or(cfg.final_time);
        cfg.snapshots = match kv.take("snapshots") {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_float("snapshots", s))
                .collect::<Result<_>>()?,
            None => vec![0.0, cfg.final_time],
        };
        cfg.observers.wavespeed = kv.boolean("observe_wavespeed")?.unwrap_or(true);
        cfg.observers.gap = kv.boolean("observe_gap")?.unwrap_or(true);
        cfg.observers.classification = kv.boolean("observe_classification")?.unwrap_or(true);
        if let Some(avg) = kv.take("interface_average_w") {
            cfg.interface_average_w = avg.parse()?;
        }
        cfg.gap_threshold = kv.float("gap_threshold")?.unwrap_or(cfg.gap_threshold);
        cfg.classification_tol = kv.float("classification_tol")?.unwrap_or(cfg.classification_tol);
        cfg.tail_fraction = kv.float("tail_fraction")?.unwrap_or(cfg.tail_fraction);
        cfg.expected = match kv.take("expected").as_deref() {
            None | Some("none") => None,
            Some(s) => Some(s.parse()?),
        };

        if let Some(k) = kv.0.keys().next() {
            return Err(Error::Config(format!(
                "unknown key `{k}` (or not applicable to profile `{profile}` / initial `{initial}`)"
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

fn f(x: f64) -> String {
    format!("{x:?}")
}

fn parse_float(key: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("key `{key}`: `{s}` is not a number")))
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|s| parse_float(key, &s)).transpose()
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        self.float(key)?
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        self.take(key)
            .map(|s| match s.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(Error::Config(format!("key `{key}`: expected true|false, got `{s}`"))),
            })
            .transpose()
    }
}
