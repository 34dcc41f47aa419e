//! Model parameters, reaction terms and homogeneous equilibria.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters of the dimensional system before rescaling.
///
/// Only used to derive [`ModelParameters`]; the solver never runs in
/// dimensional units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalParameters<T> {
    /// Healthy-tissue growth rate (1/time).
    pub rho1: T,
    /// Tumour growth rate (1/time).
    pub rho2: T,
    /// Acid production rate.
    pub rho3: T,
    /// Acid-induced healthy-tissue destruction rate.
    pub delta1: T,
    /// Acid deactivation rate.
    pub delta3: T,
    /// Healthy-tissue carrying capacity.
    pub kappa1: T,
    /// Tumour carrying capacity.
    pub kappa2: T,
    /// Tumour diffusivity (length²/time).
    pub d2: T,
    /// Maximum acid diffusivity (length²/time).
    pub d3_max: T,
}

/// The nondimensional quadruple `(d, r, D, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParameters<T> {
    /// Acid destructiveness towards healthy tissue.
    pub d: T,
    /// Tumour to healthy growth-rate ratio.
    pub r: T,
    /// Tumour to acid diffusivity ratio, typically `D << 1`.
    pub diffusivity_ratio: T,
    /// Acid kinetics rate.
    pub c: T,
}

impl<T: Scalar> ModelParameters<T> {
    pub fn new(d: T, r: T, diffusivity_ratio: T, c: T) -> Result<Self> {
        positive("d", d)?;
        positive("r", r)?;
        positive("D", diffusivity_ratio)?;
        positive("c", c)?;
        if diffusivity_ratio >= T::one() {
            log::warn!("tumour/acid diffusivity ratio D = {diffusivity_ratio} is not small; the model assumes D << 1");
        }
        Ok(Self {
            d,
            r,
            diffusivity_ratio,
            c,
        })
    }

    /// Builds parameters without validation, e.g. zero reaction rates for
    /// pure-diffusion diagnostics.
    pub fn new_unchecked(d: T, r: T, diffusivity_ratio: T, c: T) -> Self {
        Self {
            d,
            r,
            diffusivity_ratio,
            c,
        }
    }
}

fn positive<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value.as_f64(), "must be finite and > 0"))
    }
}

/// Rescales the dimensional system into `(d, r, D, c)`:
/// `d = δ₁ρ₃κ₂/(δ₃ρ₁)`, `r = ρ₂/ρ₁`, `c = δ₃/ρ₁`, `D = D₂/max D₃`.
pub fn nondimensionalize<T: Scalar>(p: &DimensionalParameters<T>) -> Result<ModelParameters<T>> {
    positive("rho1", p.rho1)?;
    positive("rho2", p.rho2)?;
    positive("rho3", p.rho3)?;
    positive("delta1", p.delta1)?;
    positive("delta3", p.delta3)?;
    positive("kappa1", p.kappa1)?;
    positive("kappa2", p.kappa2)?;
    positive("D2", p.d2)?;
    positive("D3max", p.d3_max)?;

    let d = p.delta1 * p.rho3 * p.kappa2 / (p.delta3 * p.rho1);
    let r = p.rho2 / p.rho1;
    let c = p.delta3 / p.rho1;
    let diffusivity_ratio = p.d2 / p.d3_max;
    ModelParameters::new(d, r, diffusivity_ratio, c)
}

/// Healthy-tissue kinetics `u (1 - u - d w)`.
#[inline]
pub fn reaction_u<T: Scalar>(u: T, w: T, d: T) -> T {
    u * (T::one() - u - d * w)
}

/// Logistic tumour growth `r v (1 - v)`.
#[inline]
pub fn reaction_v<T: Scalar>(v: T, r: T) -> T {
    r * v * (T::one() - v)
}

/// Acid production and deactivation `c (v - w)`.
#[inline]
pub fn reaction_w<T: Scalar>(v: T, w: T, c: T) -> T {
    c * (v - w)
}

/// A `(u, v, w)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple<T> {
    pub u: T,
    pub v: T,
    pub w: T,
}

impl<T> Triple<T> {
    pub const fn new(u: T, v: T, w: T) -> Self {
        Self { u, v, w }
    }
}

/// Far-field states of an invasion front travelling to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticStates<T> {
    /// Invaded state at `-∞`.
    pub left: Triple<T>,
    /// Healthy state at `+∞`, always `(1, 0, 0)`.
    pub right: Triple<T>,
}

/// Equilibria connected by an invasion front.
///
/// For `d >= 1` the healthy tissue is destroyed behind the front (`u = 0`);
/// for `0 < d < 1` a residual `u = 1 - d` survives. The two formulas agree at
/// `d = 1`.
pub fn asymptotic_states<T: Scalar>(d: T) -> Result<AsymptoticStates<T>> {
    positive("d", d)?;
    let residual = if d >= T::one() { T::zero() } else { T::one() - d };
    Ok(AsymptoticStates {
        left: Triple::new(residual, T::one(), T::one()),
        right: Triple::new(T::one(), T::zero(), T::zero()),
    })
}

/// Minimal Fisher–KPP front speed `2 √(r D)`, an upper reference for the
/// full system's minimal speed while `u <= 1`.
pub fn fkpp_minimal_speed<T: Scalar>(r: T, diffusivity_ratio: T) -> Result<T> {
    positive("r", r)?;
    positive("D", diffusivity_ratio)?;
    Ok(T::lit(2.0) * (r * diffusivity_ratio).sqrt())
}
