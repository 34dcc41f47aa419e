use crate::error::{Error, Result};
use crate::mesh::DiffusionProfile;
use crate::model::ModelParameters;
use crate::scalar::Scalar;
use crate::scheme::{run, SchemeOptions, SimulationState};

use super::wavespeed::{WaveSpeedObserver, WaveSpeedSeries};

/// Harmonic mean of the two-valued periodic coefficient taking `α1` on a
/// fraction `β` of each period and `α0` on the rest:
/// `α0 α1 / (α0 β + (1 − β) α1)`.
pub fn harmonic_mean_piecewise<T: Scalar>(alpha0: T, alpha1: T, beta: T) -> Result<T> {
    if !(alpha0 > T::zero()) {
        return Err(Error::domain("alpha0", alpha0.as_f64(), "must be > 0"));
    }
    if !(alpha1 > T::zero()) {
        return Err(Error::domain("alpha1", alpha1.as_f64(), "must be > 0"));
    }
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::domain("beta", beta.as_f64(), "must lie in (0, 1)"));
    }
    Ok(alpha0 * alpha1 / (alpha0 * beta + (T::one() - beta) * alpha1))
}

/// Harmonic mean `(1/p ∫₀ᵖ dy / A(y))⁻¹` of a periodic profile over one
/// period, by composite two-point Gauss–Legendre on panels that never
/// straddle a discontinuity. Panels double until two successive estimates
/// agree to `tol` relatively.
pub fn harmonic_mean_quadrature<T: Scalar>(profile: &DiffusionProfile<T>, tol: T) -> Result<T> {
    profile.validate()?;
    let Some(period) = profile.period() else {
        return Err(Error::domain(
            "profile",
            f64::NAN,
            "harmonic mean quadrature needs a periodic profile",
        ));
    };
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::domain("tol", tol.as_f64(), "must lie in (0, 1)"));
    }
    let mut cuts = vec![T::zero()];
    cuts.extend(profile.period_breakpoints());
    cuts.push(period);

    let floor = tol.max(T::lit(16.0) * T::epsilon());
    let mut panels = 8usize;
    let mut previous = gauss2(profile, &cuts, panels);
    while panels < 1 << 22 {
        panels *= 2;
        let current = gauss2(profile, &cuts, panels);
        if (current - previous).abs() <= floor * current.abs() {
            return Ok(period / current);
        }
        previous = current;
    }
    Err(Error::Numerical(format!(
        "harmonic mean quadrature did not reach tolerance {tol}"
    )))
}

/// `∫ dy / A(y)` over `[cuts[0], cuts[last]]` with `panels` panels per piece.
fn gauss2<T: Scalar>(profile: &DiffusionProfile<T>, cuts: &[T], panels: usize) -> T {
    let node = T::lit(0.5) / T::lit(3.0).sqrt();
    let half = T::lit(0.5);
    let mut total = T::zero();
    for piece in cuts.windows(2) {
        let h = (piece[1] - piece[0]) / T::from_usize_lossy(panels);
        for k in 0..panels {
            let mid = piece[0] + (T::from_usize_lossy(k) + half) * h;
            let a = profile.evaluate(mid - node * h);
            let b = profile.evaluate(mid + node * h);
            total = total + half * h * (a.recip() + b.recip());
        }
    }
    total
}

/// Closed-form effective diffusivity used for homogenization: the harmonic
/// mean for periodic profiles (`√(α0 α1)` for the sinusoid) and the value
/// itself for a constant.
pub fn effective_diffusivity<T: Scalar>(profile: &DiffusionProfile<T>) -> Result<T> {
    profile.validate()?;
    match *profile {
        DiffusionProfile::Constant { a } => Ok(a),
        DiffusionProfile::Sinusoidal { alpha0, alpha1, .. } => Ok((alpha0 * alpha1).sqrt()),
        DiffusionProfile::PeriodicPiecewiseConstant {
            alpha0, alpha1, beta, ..
        } => harmonic_mean_piecewise(alpha0, alpha1, beta),
        DiffusionProfile::SingleJump { .. } => Err(Error::domain(
            "profile",
            f64::NAN,
            "a single jump has no effective diffusivity",
        )),
    }
}

/// Everything needed to integrate a front and record its speed, except the
/// diffusion profile.
#[derive(Debug, Clone)]
pub struct SpeedRun<T> {
    pub initial: SimulationState<T>,
    pub params: ModelParameters<T>,
    pub opts: SchemeOptions<T>,
    pub final_time: T,
    pub tail_fraction: T,
}

/// Runs `spec` under `profile`, recording the tumour-front speed.
pub fn run_with_wave_speed<T: Scalar>(
    spec: &SpeedRun<T>,
    profile: &DiffusionProfile<T>,
) -> Result<(SimulationState<T>, WaveSpeedSeries<T>)> {
    let mut obs = WaveSpeedObserver::tumour(spec.tail_fraction)?;
    let last = run(
        spec.initial.clone(),
        profile,
        &spec.params,
        &spec.opts,
        spec.final_time,
        &mut [&mut obs],
    )?;
    Ok((last, obs.into_series()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizationTolerances<T> {
    /// Bound on `|θ_periodic − θ_effective| / θ_effective`.
    pub tol_gap: T,
    /// Bound on the relative peak-to-peak oscillation of the periodic run.
    pub tol_osc: T,
}

impl<T: Scalar> Default for HomogenizationTolerances<T> {
    fn default() -> Self {
        Self {
            tol_gap: T::lit(0.04),
            tol_osc: T::lit(0.10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizationVerdict<T> {
    pub effective_diffusivity: T,
    pub theta_periodic_tail: T,
    pub theta_effective_tail: T,
    pub relative_gap: T,
    pub oscillation_amplitude: T,
    pub homogenized: bool,
}

/// Runs `spec` with the periodic `profile` and with the constant effective
/// diffusivity (concurrently), then compares the asymptotic speeds.
pub fn homogenization_compare<T: Scalar>(
    spec: &SpeedRun<T>,
    profile: &DiffusionProfile<T>,
    tol: HomogenizationTolerances<T>,
) -> Result<HomogenizationVerdict<T>> {
    if profile.period().is_none() {
        return Err(Error::domain(
            "profile",
            f64::NAN,
            "homogenization needs a periodic profile",
        ));
    }
    let a_eff = effective_diffusivity(profile)?;
    let constant = DiffusionProfile::constant(a_eff)?;
    let (periodic, effective) = rayon::join(
        || run_with_wave_speed(spec, profile),
        || run_with_wave_speed(spec, &constant),
    );
    let periodic = periodic?.1.tail_speed()?;
    let effective = effective?.1.tail_speed()?;
    let relative_gap = (periodic.mean - effective.mean).abs() / effective.mean.abs();
    let oscillation_amplitude = periodic.peak_to_peak;
    Ok(HomogenizationVerdict {
        effective_diffusivity: a_eff,
        theta_periodic_tail: periodic.mean,
        theta_effective_tail: effective.mean,
        relative_gap,
        oscillation_amplitude,
        homogenized: relative_gap <= tol.tol_gap && oscillation_amplitude <= tol.tol_osc,
    })
}
