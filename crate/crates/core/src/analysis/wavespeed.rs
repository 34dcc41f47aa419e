use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scheme::{Observer, SimulationState};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

/// Mass-increment speed estimate on a uniform mesh:
///
/// ```text
/// θ = (Δx/Δt) Σ_i (v⁺_i − v_i) / (v₋ − v₊)
/// ```
///
/// with `v₋`, `v₊` the far-field states left and right of the front.
pub fn leveque_yee_step<T: Scalar>(v_prev: &[T], v_next: &[T], dx: T, dt: T, v_minus: T, v_plus: T) -> Result<T> {
    check_inputs(v_prev, v_next, dt, v_minus, v_plus)?;
    if !(dx > T::zero()) {
        return Err(Error::domain("dx", dx.as_f64(), "must be > 0"));
    }
    let increment: T = v_prev.iter().zip(v_next).map(|(&a, &b)| b - a).sum();
    Ok(dx / dt * increment / (v_minus - v_plus))
}

/// Width-weighted form for nonuniform meshes, `Σ Δx_i (v⁺_i − v_i) / (Δt (v₋ − v₊))`.
/// Agrees with [`leveque_yee_step`] when all widths are equal.
pub fn leveque_yee_step_weighted<T: Scalar>(
    v_prev: &[T],
    v_next: &[T],
    widths: &[T],
    dt: T,
    v_minus: T,
    v_plus: T,
) -> Result<T> {
    check_inputs(v_prev, v_next, dt, v_minus, v_plus)?;
    if widths.len() != v_prev.len() {
        return Err(Error::Config("widths and fields differ in length".into()));
    }
    let mass: T = v_prev
        .iter()
        .zip(v_next)
        .zip(widths)
        .map(|((&a, &b), &h)| (b - a) * h)
        .sum();
    Ok(mass / dt / (v_minus - v_plus))
}

fn check_inputs<T: Scalar>(v_prev: &[T], v_next: &[T], dt: T, v_minus: T, v_plus: T) -> Result<()> {
    if v_minus == v_plus {
        return Err(Error::domain("v_minus - v_plus", 0.0, "far-field states must differ"));
    }
    if !(dt > T::zero()) {
        return Err(Error::domain("dt", dt.as_f64(), "must be > 0"));
    }
    if v_prev.len() != v_next.len() {
        return Err(Error::Config(format!(
            "field lengths differ: {} vs {}",
            v_prev.len(),
            v_next.len()
        )));
    }
    Ok(())
}

/// Per-step speed estimates and the fraction of them treated as asymptotic.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSpeedSeries<T> {
    thetas: Vec<T>,
    times: Vec<T>,
    tail_fraction: T,
}

impl<T: Scalar> WaveSpeedSeries<T> {
    pub fn new(tail_fraction: T) -> Result<Self> {
        if !(tail_fraction > T::zero() && tail_fraction <= T::one()) {
            return Err(Error::domain(
                "tail_fraction",
                tail_fraction.as_f64(),
                "must lie in (0, 1]",
            ));
        }
        Ok(Self {
            thetas: Vec::new(),
            times: Vec::new(),
            tail_fraction,
        })
    }

    pub fn from_parts(thetas: Vec<T>, times: Vec<T>, tail_fraction: T) -> Result<Self> {
        if thetas.len() != times.len() {
            return Err(Error::Config(format!(
                "{} speeds but {} time stamps",
                thetas.len(),
                times.len()
            )));
        }
        let mut s = Self::new(tail_fraction)?;
        s.thetas = thetas;
        s.times = times;
        Ok(s)
    }

    pub fn push(&mut self, time: T, theta: T) {
        self.times.push(time);
        self.thetas.push(theta);
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn tail_fraction(&self) -> T {
        self.tail_fraction
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// The last `ceil(tail_fraction · len)` estimates.
    pub fn tail(&self) -> &[T] {
        let n = self.thetas.len();
        let k = (self.tail_fraction.as_f64() * n as f64 - 1e-9).ceil().max(1.0) as usize;
        &self.thetas[n - k.min(n)..]
    }

    pub fn tail_speed(&self) -> Result<TailSpeed<T>> {
        tail_speed(self)
    }
}

/// Tail statistics of a speed series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSpeed<T> {
    pub mean: T,
    /// `(max − min) / |mean|` over the tail.
    pub peak_to_peak: T,
}

/// Mean and relative peak-to-peak amplitude over the tail window.
pub fn tail_speed<T: Scalar>(series: &WaveSpeedSeries<T>) -> Result<TailSpeed<T>> {
    if series.is_empty() {
        return Err(Error::domain("series length", 0.0, "wave-speed series is empty"));
    }
    let tail = series.tail();
    let mean = tail.iter().copied().sum::<T>() / T::from_usize_lossy(tail.len());
    let hi = tail.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = tail.iter().copied().fold(T::infinity(), T::min);
    let spread = hi - lo;
    let peak_to_peak = if spread == T::zero() {
        T::zero()
    } else if mean == T::zero() {
        T::infinity()
    } else {
        spread / mean.abs()
    };
    Ok(TailSpeed { mean, peak_to_peak })
}

/// Which field a [`WaveSpeedObserver`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackedField {
    U,
    V,
    W,
}

/// Accumulates one mass-increment speed estimate per step.
#[derive(Debug, Clone)]
pub struct WaveSpeedObserver<T> {
    field: TrackedField,
    minus: T,
    plus: T,
    series: WaveSpeedSeries<T>,
}

impl<T: Scalar> WaveSpeedObserver<T> {
    pub fn new(field: TrackedField, minus: T, plus: T, tail_fraction: T) -> Result<Self> {
        if minus == plus {
            return Err(Error::domain("v_minus - v_plus", 0.0, "far-field states must differ"));
        }
        Ok(Self {
            field,
            minus,
            plus,
            series: WaveSpeedSeries::new(tail_fraction)?,
        })
    }

    /// Tumour front: `v` from 1 behind the front to 0 ahead of it.
    pub fn tumour(tail_fraction: T) -> Result<Self> {
        Self::new(TrackedField::V, T::one(), T::zero(), tail_fraction)
    }

    pub fn series(&self) -> &WaveSpeedSeries<T> {
        &self.series
    }

    pub fn into_series(self) -> WaveSpeedSeries<T> {
        self.series
    }
}

impl<T: Scalar> Observer<T> for WaveSpeedObserver<T> {
    fn observe(&mut self, _step: usize, prev: &SimulationState<T>, cur: &SimulationState<T>) -> Result<()> {
        let pick = |s: &'_ SimulationState<T>| -> Vec<T> {
            match self.field {
                TrackedField::U => s.u.to_vec(),
                TrackedField::V => s.v.to_vec(),
                TrackedField::W => s.w.to_vec(),
            }
        };
        let (a, b) = (pick(prev), pick(cur));
        let dt = cur.time - prev.time;
        let theta = match cur.mesh.uniform_dx() {
            Some(dx) => leveque_yee_step(&a, &b, dx, dt, self.minus, self.plus)?,
            None => leveque_yee_step_weighted(&a, &b, cur.mesh.widths(), dt, self.minus, self.plus)?,
        };
        self.series.push(cur.time, theta);
        Ok(())
    }
}
