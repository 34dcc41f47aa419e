use crate::analysis::InvasionRegime::{self, Heterogeneous, Homogeneous, Hybrid};
use crate::error::{Error, Result};
use crate::mesh::DiffusionProfile;

use super::batch::{homogenization_rows, ProfileFamily};
use super::config::{InitialKind, ScenarioConfig};

fn scenario(
    name: String,
    description: String,
    d: f64,
    profile: DiffusionProfile<f64>,
    expected: Option<InvasionRegime>,
) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::baseline(&name, d).expect("preset parameters are valid");
    cfg.description = description;
    cfg.profile = profile;
    cfg.expected = expected;
    cfg
}

fn constant(a: f64) -> DiffusionProfile<f64> {
    DiffusionProfile::constant(a).expect("valid preset profile")
}

fn jump(a1: f64, a2: f64) -> DiffusionProfile<f64> {
    DiffusionProfile::single_jump(a1, a2, 0.625).expect("valid preset profile")
}

fn sine(alpha0: f64, alpha1: f64, omega: f64) -> DiffusionProfile<f64> {
    DiffusionProfile::sinusoidal(alpha0, alpha1, omega).expect("valid preset profile")
}

/// The full catalogue, in listing order.
pub fn presets() -> Vec<ScenarioConfig> {
    let mut out = Vec::new();

    for (d, e) in [
        (0.5, Some(Heterogeneous)),
        (1.5, None),
        (2.5, Some(Hybrid)),
        (12.5, Some(Homogeneous)),
    ] {
        out.push(scenario(
            format!("table1-d{d}"),
            format!("homogeneous acid diffusion A = 1, d = {d}"),
            d,
            constant(1.0),
            e,
        ));
    }

    let riemann = InitialKind::riemann(0.0, 1.0);
    for (d, e) in [
        (0.5, Some(Heterogeneous)),
        (1.5, Some(Hybrid)),
        (12.5, Some(Hybrid)),
        (35.0, Some(Homogeneous)),
    ] {
        let mut c = scenario(
            format!("jump-increasing-d{d}"),
            format!("single jump A = 0.1 | 1 at x = 5/8, Riemann data, d = {d}"),
            d,
            jump(0.1, 1.0),
            e,
        );
        c.initial = riemann;
        out.push(c);
    }
    for (d, e) in [(0.5, Some(Heterogeneous)), (12.5, Some(Homogeneous))] {
        let mut c = scenario(
            format!("jump-decreasing-d{d}"),
            format!("single jump A = 1 | 0.1 at x = 5/8, Riemann data, d = {d}"),
            d,
            jump(1.0, 0.1),
            e,
        );
        c.initial = riemann;
        out.push(c);
    }
    for (a1, a2) in [(1.0, 0.8), (0.3, 0.1)] {
        out.push(scenario(
            format!("jump-mild-{a1}-{a2}-d12.5"),
            format!("single jump A = {a1} | {a2} at x = 5/8, d = 12.5"),
            12.5,
            jump(a1, a2),
            Some(Homogeneous),
        ));
    }
    for (label, a1, a2) in [("increasing", 0.1, 1.0), ("decreasing", 1.0, 0.1)] {
        out.push(scenario(
            format!("jump-{label}-linear-d0.5"),
            format!("single jump A = {a1} | {a2} at x = 5/8, piecewise-linear data, d = 0.5"),
            0.5,
            jump(a1, a2),
            Some(Heterogeneous),
        ));
    }

    for (d, e) in [
        (0.5, Some(Heterogeneous)),
        (1.5, Some(Hybrid)),
        (20.0, None),
        (30.0, Some(Hybrid)),
        (60.0, Some(Homogeneous)),
    ] {
        out.push(scenario(
            format!("periodic-w50-d{d}"),
            format!("sinusoidal A in [0.1, 1], omega = 50, d = {d}"),
            d,
            sine(0.1, 1.0, 50.0),
            e,
        ));
    }
    out.push(scenario(
        "periodic-w100-d20".into(),
        "sinusoidal A in [0.1, 1], omega = 100, d = 20".into(),
        20.0,
        sine(0.1, 1.0, 100.0),
        None,
    ));
    for (d, e) in [(0.5, Some(Heterogeneous)), (20.0, Some(Homogeneous))] {
        out.push(scenario(
            format!("amplitude-0.4-0.6-d{d}"),
            format!("sinusoidal A in [0.4, 0.6], omega = 50, d = {d}"),
            d,
            sine(0.4, 0.6, 50.0),
            e,
        ));
    }

    for (d, e) in [
        (0.5, Some(Heterogeneous)),
        (1.5, None),
        (30.0, None),
        (60.0, Some(Homogeneous)),
    ] {
        out.push(scenario(
            format!("appendix-perconfig4-d{d}"),
            format!("sinusoidal A in [0.1, 1], omega = 100, d = {d}"),
            d,
            sine(0.1, 1.0, 100.0),
            e,
        ));
    }
    for (tag, a0, a1) in [
        ("perconfig8", 0.8, 1.0),
        ("perconfig11", 0.1, 0.3),
        ("perconfig12", 0.95, 1.0),
    ] {
        for (d, e) in [(0.5, Heterogeneous), (20.0, Homogeneous)] {
            out.push(scenario(
                format!("appendix-{tag}-d{d}"),
                format!("sinusoidal A in [{a0}, {a1}], omega = 50, d = {d}"),
                d,
                sine(a0, a1, 50.0),
                Some(e),
            ));
        }
    }
    out.push(scenario(
        "appendix-perconfig13-d200".into(),
        "weak sinusoidal A in [0.01, 0.06], omega = 200, d = 200; expected without a gap".into(),
        200.0,
        sine(0.01, 0.06, 200.0),
        Some(Hybrid),
    ));

    let growth = |name: String, r: f64, d: f64| {
        let mut c = scenario(
            name,
            format!("sinusoidal A in [0.1, 1], omega = 50, r = {r}, d = {d}, T = 40 on [0, 2.5]"),
            d,
            sine(0.1, 1.0, 50.0),
            None,
        );
        c.params.r = r;
        c.xmax = 2.5;
        c.final_time = 40.0;
        c.snapshots = vec![0.0, 40.0];
        c
    };
    out.push(growth("growth-r10-w50".into(), 10.0, 0.5));
    for d in [0.5, 1.5, 30.0, 60.0] {
        out.push(growth(format!("growth-r10-w50-d{d}"), 10.0, d));
    }
    for r in [1.0, 10.0] {
        for d in [0.5, 1.5, 30.0] {
            out.push(growth(format!("appendix-wavespeed5-r{r}-d{d}"), r, d));
        }
    }

    for row in homogenization_rows() {
        for family in [ProfileFamily::PiecewiseConstant, ProfileFamily::Sinusoidal] {
            out.push(row.config(family).expect("valid table rows"));
        }
    }
    out
}

pub fn preset_names() -> Vec<String> {
    presets().into_iter().map(|c| c.name).collect()
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let all = presets();
    let names = all.iter().map(|c| c.name.clone()).collect::<Vec<_>>().join(", ");
    all.into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_owned(),
            available: names,
        })
}
