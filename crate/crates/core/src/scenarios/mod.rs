//! Scenario layer: flat key=value configurations, the preset catalogue,
//! initial data and file output. Everything here runs in `f64`.

mod batch;
mod config;
mod output;
mod presets;

pub use batch::{
    homogenization_rows, run_homogenization_suite, speed_table, FamilyVerdict, HomogenizationRow, ProfileFamily,
    SpeedTableEntry, VerdictRow,
};
pub use config::{InitialKind, ObserverFlags, Overrides, ScenarioConfig};
pub use output::{format_float, run_scenario, snapshot_file_name, RunSummary};
pub use presets::{preset, preset_names, presets};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{CellAveragedField, Mesh};
use crate::scheme::SimulationState;

/// Initial data with `u = 1 − v` and `w = 0`, sampled at cell centres.
pub fn initial_state(kind: &InitialKind, mesh: Arc<Mesh<f64>>) -> Result<SimulationState<f64>> {
    let inside = |x: f64| x >= mesh.xmin() && x <= mesh.xmax();
    let v: CellAveragedField<f64> = match *kind {
        InitialKind::Riemann { jump } => {
            if !inside(jump) {
                return Err(Error::Config(format!(
                    "riemann jump {jump} lies outside the domain [{}, {}]",
                    mesh.xmin(),
                    mesh.xmax()
                )));
            }
            mesh.centers()
                .iter()
                .map(|&x| if x < jump { 1.0 } else { 0.0 })
                .collect()
        }
        InitialKind::PiecewiseLinear { core_end, ramp_end } => {
            if !(inside(core_end) && inside(ramp_end) && core_end < ramp_end) {
                return Err(Error::Config(format!(
                    "piecewise-linear breakpoints {core_end} < {ramp_end} must lie in [{}, {}]",
                    mesh.xmin(),
                    mesh.xmax()
                )));
            }
            mesh.centers()
                .iter()
                .map(|&x| ((ramp_end - x) / (ramp_end - core_end)).clamp(0.0, 1.0))
                .collect()
        }
    };
    let u = v.iter().map(|&vi| 1.0 - vi).collect();
    let n = mesh.len();
    SimulationState::new(0.0, mesh, u, v, CellAveragedField::constant(n, 0.0))
}
