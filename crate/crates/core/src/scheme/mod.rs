//! Finite-volume semi-discretisation and the IMEX time step.
//!
//! Reactions are advanced explicitly; the diffusion of `v` (coefficient
//! `D(1 - u)`, with the freshly updated `u`) and of `w` (coefficient `A(x)`)
//! is taken implicitly, one tridiagonal solve each. Both ends carry
//! zero-flux (Neumann) closures.

mod operator;
mod stepper;
mod tridiagonal;

use std::sync::Arc;

pub use operator::{
    assemble_implicit_v, assemble_implicit_w, diffusion_operator, interface_coefficients_v, interface_coefficients_w,
    interface_diffusivity_arithmetic, interface_diffusivity_harmonic, semidiscrete_rhs, DiffusionOperator,
};
pub use stepper::{run, step_imex, ImexStepper, Observer};
pub use tridiagonal::{solve_tridiagonal, TridiagonalSystem};

use crate::error::{Error, Result};
use crate::mesh::{CellAveragedField, Mesh};
use crate::model::ModelParameters;
use crate::scalar::Scalar;

/// Averaging rule for a diffusion coefficient at a cell interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterfaceAverage {
    /// Width-weighted arithmetic mean.
    #[default]
    Arithmetic,
    /// `2 a_L a_R / (a_L + a_R)`; needs strictly positive coefficients.
    Harmonic,
}

impl InterfaceAverage {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Arithmetic => "arithmetic",
            Self::Harmonic => "harmonic",
        }
    }
}

impl std::str::FromStr for InterfaceAverage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arithmetic" => Ok(Self::Arithmetic),
            "harmonic" => Ok(Self::Harmonic),
            other => Err(Error::Config(format!(
                "unknown interface average `{other}` (expected arithmetic|harmonic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions<T> {
    pub dt: T,
    pub interface_average_w: InterfaceAverage,
}

impl<T: Scalar> SchemeOptions<T> {
    pub fn new(dt: T, interface_average_w: InterfaceAverage) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Config(format!("time step dt = {dt} must be > 0")));
        }
        Ok(Self {
            dt,
            interface_average_w,
        })
    }

    /// The degenerate `v` flux `D(1 - u)` vanishes where `u = 1`, which rules
    /// out the harmonic mean; `v` always uses the arithmetic rule.
    pub fn interface_average_v(&self) -> InterfaceAverage {
        InterfaceAverage::Arithmetic
    }

    /// Explicit-Euler heuristic for the stiffest reaction rate:
    /// warns when `dt · max(1, r, c) > 2`. Logged, never enforced.
    pub fn stability_warning(&self, params: &ModelParameters<T>) -> Option<String> {
        let rate = T::one().max(params.r).max(params.c);
        if self.dt * rate > T::lit(2.0) {
            let msg = format!(
                "dt = {} exceeds the explicit reaction stability heuristic dt * max(1, r, c) <= 2 (rate {rate})",
                self.dt
            );
            log::warn!("{msg}");
            Some(msg)
        } else {
            None
        }
    }
}

/// Cell averages of `u`, `v`, `w` at a given time on a shared mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState<T> {
    pub time: T,
    pub mesh: Arc<Mesh<T>>,
    pub u: CellAveragedField<T>,
    pub v: CellAveragedField<T>,
    pub w: CellAveragedField<T>,
}

impl<T: Scalar> SimulationState<T> {
    pub fn new(
        time: T,
        mesh: Arc<Mesh<T>>,
        u: CellAveragedField<T>,
        v: CellAveragedField<T>,
        w: CellAveragedField<T>,
    ) -> Result<Self> {
        let n = mesh.len();
        for (name, f) in [("u", &u), ("v", &v), ("w", &w)] {
            if f.len() != n {
                return Err(Error::Config(format!(
                    "field {name} has {} values for a mesh of {n} cells",
                    f.len()
                )));
            }
            if !f.all_finite() {
                return Err(Error::Numerical(format!("field {name} holds non-finite values")));
            }
        }
        Ok(Self { time, mesh, u, v, w })
    }

    /// Spatially constant state.
    pub fn uniform(time: T, mesh: Arc<Mesh<T>>, u: T, v: T, w: T) -> Result<Self> {
        let n = mesh.len();
        Self::new(
            time,
            mesh,
            CellAveragedField::constant(n, u),
            CellAveragedField::constant(n, v),
            CellAveragedField::constant(n, w),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.u.all_finite() && self.v.all_finite() && self.w.all_finite()
    }

    /// Smallest value over all three fields.
    pub fn min_value(&self) -> T {
        self.u.min().min(self.v.min()).min(self.w.min())
    }

    /// Max-norm distance to another state on the same mesh.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        [(&self.u, &other.u), (&self.v, &other.v), (&self.w, &other.w)]
            .into_iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(&x, &y)| (x - y).abs()))
            .fold(T::zero(), T::max)
    }
}
