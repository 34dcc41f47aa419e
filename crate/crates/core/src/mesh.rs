//! Finite-volume meshes, acid diffusion profiles and their cell averages.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A 1-D partition `x_{1/2} < x_{3/2} < … < x_{N+1/2}` into `N >= 3` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    interfaces: Vec<T>,
    centers: Vec<T>,
    widths: Vec<T>,
    uniform: bool,
}

impl<T: Scalar> Mesh<T> {
    pub const MIN_CELLS: usize = 3;

    /// Uniform mesh of `round((xmax - xmin) / dx)` cells.
    ///
    /// The ratio must be an integer up to a relative tolerance of `1e-6`; the
    /// final interface is pinned to `xmax`.
    pub fn uniform(xmin: T, xmax: T, dx: T) -> Result<Self> {
        if !(xmax > xmin) || !xmin.is_finite() || !xmax.is_finite() {
            return Err(Error::Config(format!("degenerate domain [{xmin}, {xmax}]")));
        }
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::Config(format!("cell width dx = {dx} must be > 0")));
        }
        let ratio = ((xmax - xmin) / dx).as_f64();
        let n = ratio.round();
        if (ratio - n).abs() > 1e-6 * n.max(1.0) {
            return Err(Error::Config(format!(
                "domain length {} is not an integer multiple of dx = {dx} (ratio {ratio})",
                xmax - xmin
            )));
        }
        let n = n as usize;
        if n < Self::MIN_CELLS {
            return Err(Error::Config(format!(
                "mesh needs at least {} cells, got {n}",
                Self::MIN_CELLS
            )));
        }
        let length = xmax - xmin;
        let nn = T::from_usize_lossy(n);
        let mut interfaces: Vec<T> = (0..=n).map(|i| xmin + length * T::from_usize_lossy(i) / nn).collect();
        interfaces[n] = xmax;
        Self::from_interfaces(interfaces)
    }

    /// Mesh from an explicit, strictly increasing interface sequence.
    pub fn from_interfaces(interfaces: Vec<T>) -> Result<Self> {
        if interfaces.len() < Self::MIN_CELLS + 1 {
            return Err(Error::Config(format!(
                "mesh needs at least {} cells, got {}",
                Self::MIN_CELLS,
                interfaces.len().saturating_sub(1)
            )));
        }
        if interfaces.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("mesh interfaces must be finite".into()));
        }
        if let Some(w) = interfaces.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Config(format!(
                "mesh interfaces must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let half = T::lit(0.5);
        let centers = interfaces.windows(2).map(|w| half * (w[0] + w[1])).collect();
        let mut widths: Vec<T> = interfaces.windows(2).map(|w| w[1] - w[0]).collect();
        let length = interfaces[interfaces.len() - 1] - interfaces[0];
        let (lo, hi) = widths.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &w| {
            (lo.min(w), hi.max(w))
        });
        let uniform = hi - lo <= T::lit(1e-12) * length;
        if uniform {
            // Differences of rounded interface positions scatter by a few ulp.
            let dx = length / T::from_usize_lossy(widths.len());
            widths.iter_mut().for_each(|w| *w = dx);
        }
        Ok(Self {
            interfaces,
            centers,
            widths,
            uniform,
        })
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    pub fn interfaces(&self) -> &[T] {
        &self.interfaces
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn widths(&self) -> &[T] {
        &self.widths
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Common cell width of a uniform mesh.
    pub fn uniform_dx(&self) -> Option<T> {
        self.uniform.then(|| self.length() / T::from_usize_lossy(self.len()))
    }

    pub fn xmin(&self) -> T {
        self.interfaces[0]
    }

    pub fn xmax(&self) -> T {
        self.interfaces[self.interfaces.len() - 1]
    }

    pub fn length(&self) -> T {
        self.xmax() - self.xmin()
    }

    /// Index of the cell `[x_{i-1/2}, x_{i+1/2})` holding `x`; the right end
    /// of the domain belongs to the last cell.
    pub fn cell_containing(&self, x: T) -> Option<usize> {
        if x < self.xmin() || x > self.xmax() {
            return None;
        }
        let idx = self.interfaces.partition_point(|&xi| xi <= x);
        Some(idx.saturating_sub(1).min(self.len() - 1))
    }

    /// Distance between the centres of cells `i` and `i + 1`,
    /// `(Δx_i + Δx_{i+1}) / 2`.
    #[inline]
    pub fn center_distance(&self, i: usize) -> T {
        T::lit(0.5) * (self.widths[i] + self.widths[i + 1])
    }
}

/// Per-cell values aligned with the cells of a [`Mesh`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellAveragedField<T>(Vec<T>);

impl<T: Scalar> CellAveragedField<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn constant(len: usize, value: T) -> Self {
        Self(vec![value; len])
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn min(&self) -> T {
        self.0.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.0.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// `Σ_i values_i Δx_i`.
    pub fn integral(&self, mesh: &Mesh<T>) -> T {
        self.0.iter().zip(mesh.widths()).map(|(&a, &w)| a * w).sum()
    }
}

impl<T> Deref for CellAveragedField<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for CellAveragedField<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> From<Vec<T>> for CellAveragedField<T> {
    fn from(values: Vec<T>) -> Self {
        Self(values)
    }
}

impl<T> FromIterator<T> for CellAveragedField<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Space-dependent acid diffusivity `A(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffusionProfile<T> {
    Constant {
        a: T,
    },
    /// `a1` on `[xmin, x_jump)`, `a2` on `[x_jump, xmax]`.
    SingleJump {
        a1: T,
        a2: T,
        x_jump: T,
    },
    /// Periodic extension of `α1` on `(0, β)` and `α0` on `(β, 1)`, rescaled
    /// to `epsilon` periods per unit length.
    PeriodicPiecewiseConstant {
        alpha0: T,
        alpha1: T,
        beta: T,
        epsilon: T,
    },
    /// `½(α1 + α0) + ½(α1 − α0) sin(ω x)`.
    Sinusoidal {
        alpha0: T,
        alpha1: T,
        omega: T,
    },
}

impl<T: Scalar> DiffusionProfile<T> {
    pub fn constant(a: T) -> Result<Self> {
        require(a > T::zero(), "a", a, "must be > 0")?;
        Ok(Self::Constant { a })
    }

    pub fn single_jump(a1: T, a2: T, x_jump: T) -> Result<Self> {
        require(a1 > T::zero(), "a1", a1, "must be > 0")?;
        require(a2 > T::zero(), "a2", a2, "must be > 0")?;
        require(x_jump.is_finite(), "x_jump", x_jump, "must be finite")?;
        Ok(Self::SingleJump { a1, a2, x_jump })
    }

    pub fn periodic_piecewise_constant(alpha0: T, alpha1: T, beta: T, epsilon: T) -> Result<Self> {
        require(alpha0 > T::zero(), "alpha0", alpha0, "must be > 0")?;
        require(alpha1 > T::zero(), "alpha1", alpha1, "must be > 0")?;
        require(beta > T::zero() && beta < T::one(), "beta", beta, "must lie in (0, 1)")?;
        require(
            epsilon >= T::one() && epsilon.is_finite(),
            "epsilon",
            epsilon,
            "must be >= 1",
        )?;
        Ok(Self::PeriodicPiecewiseConstant {
            alpha0,
            alpha1,
            beta,
            epsilon,
        })
    }

    pub fn sinusoidal(alpha0: T, alpha1: T, omega: T) -> Result<Self> {
        require(alpha0 > T::zero(), "alpha0", alpha0, "must be > 0")?;
        require(alpha1 >= alpha0, "alpha1", alpha1, "must be >= alpha0")?;
        require(omega > T::zero() && omega.is_finite(), "omega", omega, "must be > 0")?;
        Ok(Self::Sinusoidal { alpha0, alpha1, omega })
    }

    /// Re-checks the variant invariants, e.g. after constructing the enum
    /// directly.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { a } => Self::constant(a).map(drop),
            Self::SingleJump { a1, a2, x_jump } => Self::single_jump(a1, a2, x_jump).map(drop),
            Self::PeriodicPiecewiseConstant {
                alpha0,
                alpha1,
                beta,
                epsilon,
            } => Self::periodic_piecewise_constant(alpha0, alpha1, beta, epsilon).map(drop),
            Self::Sinusoidal { alpha0, alpha1, omega } => Self::sinusoidal(alpha0, alpha1, omega).map(drop),
        }
    }

    /// Pointwise `A(x)`.
    pub fn evaluate(&self, x: T) -> T {
        match *self {
            Self::Constant { a } => a,
            Self::SingleJump { a1, a2, x_jump } => {
                if x < x_jump {
                    a1
                } else {
                    a2
                }
            }
            Self::PeriodicPiecewiseConstant {
                alpha0,
                alpha1,
                beta,
                epsilon,
            } => {
                let y = x * epsilon;
                if y - y.floor() < beta {
                    alpha1
                } else {
                    alpha0
                }
            }
            Self::Sinusoidal { alpha0, alpha1, omega } => {
                let half = T::lit(0.5);
                half * (alpha1 + alpha0) + half * (alpha1 - alpha0) * (omega * x).sin()
            }
        }
    }

    pub fn min_value(&self) -> T {
        match *self {
            Self::Constant { a } => a,
            Self::SingleJump { a1, a2, .. } => a1.min(a2),
            Self::PeriodicPiecewiseConstant { alpha0, alpha1, .. } => alpha0.min(alpha1),
            Self::Sinusoidal { alpha0, .. } => alpha0,
        }
    }

    pub fn max_value(&self) -> T {
        match *self {
            Self::Constant { a } => a,
            Self::SingleJump { a1, a2, .. } => a1.max(a2),
            Self::PeriodicPiecewiseConstant { alpha0, alpha1, .. } => alpha0.max(alpha1),
            Self::Sinusoidal { alpha1, .. } => alpha1,
        }
    }

    /// Period length, `None` for non-periodic profiles.
    pub fn period(&self) -> Option<T> {
        match *self {
            Self::PeriodicPiecewiseConstant { epsilon, .. } => Some(epsilon.recip()),
            Self::Sinusoidal { omega, .. } => Some(T::lit(2.0) * T::PI() / omega),
            _ => None,
        }
    }

    /// Points inside one period `[0, p)` where the profile is discontinuous.
    pub(crate) fn period_breakpoints(&self) -> Vec<T> {
        match *self {
            Self::PeriodicPiecewiseConstant { beta, epsilon, .. } => vec![beta / epsilon],
            _ => Vec::new(),
        }
    }

    /// Exact integral average of `A` over `[xl, xr]`.
    pub fn average_over(&self, xl: T, xr: T) -> T {
        debug_assert!(xr > xl);
        match *self {
            Self::Constant { a } => a,
            Self::SingleJump { a1, a2, x_jump } => {
                if xr <= x_jump {
                    a1
                } else if xl >= x_jump {
                    a2
                } else {
                    let left = x_jump - xl;
                    let right = xr - x_jump;
                    (a1 * left + a2 * right) / (left + right)
                }
            }
            Self::PeriodicPiecewiseConstant {
                alpha0,
                alpha1,
                beta,
                epsilon,
            } => {
                // Walk the constant pieces [k, k+β)/ε and [k+β, k+1)/ε.
                let mut k = (xl * epsilon).floor();
                let mut weighted = T::zero();
                let mut total = T::zero();
                let mut single: Option<T> = None;
                let mut mixed = false;
                loop {
                    let start = k / epsilon;
                    if start >= xr {
                        break;
                    }
                    let mid = (k + beta) / epsilon;
                    let end = (k + T::one()) / epsilon;
                    for (a, b, value) in [(start, mid, alpha1), (mid, end, alpha0)] {
                        let len = b.min(xr) - a.max(xl);
                        if len > T::zero() {
                            weighted = weighted + len * value;
                            total = total + len;
                            match single {
                                None => single = Some(value),
                                Some(s) if s != value => mixed = true,
                                _ => {}
                            }
                        }
                    }
                    k = k + T::one();
                }
                match single {
                    Some(value) if !mixed => value,
                    _ => weighted / total,
                }
            }
            Self::Sinusoidal { alpha0, alpha1, omega } => {
                // (cos ωxl − cos ωxr)/(ω h) = sin(ω xc) · sin(ω h/2)/(ω h/2)
                let half = T::lit(0.5);
                let xc = half * (xl + xr);
                let t = half * omega * (xr - xl);
                let sinc = if t == T::zero() { T::one() } else { t.sin() / t };
                half * (alpha1 + alpha0) + half * (alpha1 - alpha0) * (omega * xc).sin() * sinc
            }
        }
    }
}

fn require<T: Scalar>(ok: bool, name: &'static str, value: T, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(name, value.as_f64(), reason))
    }
}

/// Integral cell averages `A_i = (1/Δx_i) ∫_{C_i} A(x) dx`, computed exactly.
pub fn project_cell_averages<T: Scalar>(profile: &DiffusionProfile<T>, mesh: &Mesh<T>) -> Result<CellAveragedField<T>> {
    profile.validate()?;
    if let DiffusionProfile::SingleJump { x_jump, .. } = *profile {
        if x_jump < mesh.xmin() || x_jump > mesh.xmax() {
            return Err(Error::domain(
                "x_jump",
                x_jump.as_f64(),
                "must lie inside the mesh domain",
            ));
        }
    }
    Ok(mesh
        .interfaces()
        .windows(2)
        .map(|w| profile.average_over(w[0], w[1]))
        .collect())
}

/// Warns when a periodic profile's period is within 5% of a whole number of
/// cells, where cell averages alias the oscillation.
pub fn aliasing_warning<T: Scalar>(profile: &DiffusionProfile<T>, mesh: &Mesh<T>) -> Option<String> {
    let period = profile.period()?;
    let dx = mesh.uniform_dx()?;
    let ratio = (period / dx).as_f64();
    let distance = (ratio - ratio.round()).abs();
    if ratio.round() >= 1.0 && distance <= 0.05 {
        let msg = format!(
            "period {} spans {ratio:.4} cells of width {dx}; cell averages may alias the oscillation",
            period
        );
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    }
}
