//! Diagnostics on simulated fronts: mass-increment wave speeds, interstitial
//! gaps and invasion regimes, harmonic-mean homogenization and a
//! manufactured-solution convergence study.

mod convergence;
mod diagnostics;
mod homogenization;
mod wavespeed;

pub use convergence::{manufactured_convergence, ConvergenceLevel, ConvergenceStudy};
pub use diagnostics::{
    classify_invasion, classify_invasion_with_threshold, detect_gap, front_indices, Classification, ExtremaTracker,
    GapReport, InvasionRegime, DEFAULT_CLASSIFICATION_TOL, DEFAULT_GAP_THRESHOLD,
};
pub use homogenization::{
    effective_diffusivity, harmonic_mean_piecewise, harmonic_mean_quadrature, homogenization_compare,
    run_with_wave_speed, HomogenizationTolerances, HomogenizationVerdict, SpeedRun,
};
pub use wavespeed::{
    leveque_yee_step, leveque_yee_step_weighted, tail_speed, TailSpeed, TrackedField, WaveSpeedObserver,
    WaveSpeedSeries, DEFAULT_TAIL_FRACTION,
};
