use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scheme::{Observer, SimulationState};

/// Density below which a cell counts as depleted.
pub const DEFAULT_GAP_THRESHOLD: f64 = 0.01;
/// Tolerance on the residual healthy density used by [`classify_invasion`].
pub const DEFAULT_CLASSIFICATION_TOL: f64 = 0.05;

/// Hypocellular zone between the tumour front and the healthy-tissue front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport<T> {
    pub present: bool,
    pub left_edge: T,
    pub right_edge: T,
    pub width: T,
    pub threshold: T,
}

/// Cell indices of the tumour front (last cell with `v >= 1/2`) and of the
/// healthy-tissue front (first cell after it with `u >= 1/2`, or `N` if
/// there is none).
pub fn front_indices<T: Scalar>(s: &SimulationState<T>) -> Option<(usize, usize)> {
    let half = T::lit(0.5);
    let v_front = s.v.iter().rposition(|&v| v >= half)?;
    let u_front = s.u[v_front + 1..]
        .iter()
        .position(|&u| u >= half)
        .map_or(s.u.len(), |k| v_front + 1 + k);
    Some((v_front, u_front))
}

/// Widest run of cells with `u < threshold` and `v < threshold` lying
/// strictly between the two fronts. Edges are the outer interfaces of the
/// run, so a one-cell gap has the width of that cell.
pub fn detect_gap<T: Scalar>(s: &SimulationState<T>, threshold: T) -> Result<GapReport<T>> {
    if !(threshold > T::zero() && threshold < T::lit(0.5)) {
        return Err(Error::domain(
            "threshold",
            threshold.as_f64(),
            "gap threshold must lie in (0, 0.5)",
        ));
    }
    let x = s.mesh.interfaces();
    let Some((v_front, u_front)) = front_indices(s) else {
        return Ok(absent(x[0], threshold));
    };
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in v_front + 1..=u_front {
        let depleted = i < u_front && s.u[i] < threshold && s.v[i] < threshold;
        match (depleted, start) {
            (true, None) => start = Some(i),
            (false, Some(a)) => {
                if best.is_none_or(|(b0, b1)| i - a > b1 - b0) {
                    best = Some((a, i));
                }
                start = None;
            }
            _ => {}
        }
    }
    Ok(match best {
        Some((a, b)) => GapReport {
            present: true,
            left_edge: x[a],
            right_edge: x[b],
            width: x[b] - x[a],
            threshold,
        },
        None => absent(x[v_front + 1], threshold),
    })
}

fn absent<T: Scalar>(at: T, threshold: T) -> GapReport<T> {
    GapReport {
        present: false,
        left_edge: at,
        right_edge: at,
        width: T::zero(),
        threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvasionRegime {
    /// Healthy tissue survives behind the front at density `1 − d`.
    Heterogeneous,
    /// Narrow overlap of the two populations, neither limit reached.
    Hybrid,
    /// Healthy tissue destroyed, with an interstitial gap ahead of the tumour.
    Homogeneous,
}

impl InvasionRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Heterogeneous => "heterogeneous",
            Self::Hybrid => "hybrid",
            Self::Homogeneous => "homogeneous",
        }
    }
}

impl std::fmt::Display for InvasionRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for InvasionRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heterogeneous" => Ok(Self::Heterogeneous),
            "hybrid" => Ok(Self::Hybrid),
            "homogeneous" => Ok(Self::Homogeneous),
            other => Err(Error::Config(format!("unknown invasion regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification<T> {
    pub regime: InvasionRegime,
    /// Healthy density sampled behind the tumour front.
    pub residual_u: T,
    pub gap: GapReport<T>,
}

/// [`classify_invasion_with_threshold`] at the default gap threshold.
pub fn classify_invasion<T: Scalar>(s: &SimulationState<T>, d: T, tol: T) -> Result<Classification<T>> {
    classify_invasion_with_threshold(s, d, tol, T::lit(DEFAULT_GAP_THRESHOLD))
}

/// Classifies the invasion regime of a state holding one tumour front.
///
/// The residual is the smallest `u >= tol` among invaded cells (`v >= 1/2`
/// left of the front). Cells where `u` is below `tol` are skipped because a
/// tumour core seeded with `u = 0` stays at zero forever. If no invaded cell
/// reaches `tol`, the residual is the largest `u` found there.
pub fn classify_invasion_with_threshold<T: Scalar>(
    s: &SimulationState<T>,
    d: T,
    tol: T,
    gap_threshold: T,
) -> Result<Classification<T>> {
    let half = T::lit(0.5);
    if !(s.v.max() > half && s.v.min() < half) {
        return Err(Error::Classification(format!(
            "no tumour front: v ranges over [{}, {}]",
            s.v.min(),
            s.v.max()
        )));
    }
    let (v_front, _) = front_indices(s).expect("front exists when max v > 1/2");
    let invaded = (0..=v_front).filter(|&i| s.v[i] >= half).map(|i| s.u[i]);
    let residual_u = invaded
        .clone()
        .filter(|&u| u >= tol)
        .fold(None, |acc: Option<T>, u| Some(acc.map_or(u, |a| a.min(u))))
        .unwrap_or_else(|| invaded.fold(T::zero(), T::max));
    let gap = detect_gap(s, gap_threshold)?;

    let regime = if d < T::one() && (residual_u - (T::one() - d)).abs() <= tol && !gap.present {
        InvasionRegime::Heterogeneous
    } else if residual_u < tol && gap.present {
        InvasionRegime::Homogeneous
    } else {
        InvasionRegime::Hybrid
    };
    Ok(Classification {
        regime,
        residual_u,
        gap,
    })
}

/// Running minimum and maximum of every field over all observed steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaTracker<T> {
    pub min: T,
    pub max: T,
    /// Rightmost tumour-front cell seen so far.
    pub max_front_index: usize,
}

impl<T: Scalar> ExtremaTracker<T> {
    pub fn new() -> Self {
        Self {
            min: T::infinity(),
            max: T::neg_infinity(),
            max_front_index: 0,
        }
    }

    /// Includes the initial state in the tally.
    pub fn seeded(s: &SimulationState<T>) -> Self {
        let mut t = Self::new();
        t.record(s);
        t
    }

    fn record(&mut self, s: &SimulationState<T>) {
        for f in [&s.u, &s.v, &s.w] {
            self.min = self.min.min(f.min());
            self.max = self.max.max(f.max());
        }
        if let Some((vf, _)) = front_indices(s) {
            self.max_front_index = self.max_front_index.max(vf);
        }
    }
}

impl<T: Scalar> Default for ExtremaTracker<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Observer<T> for ExtremaTracker<T> {
    fn observe(&mut self, _step: usize, _prev: &SimulationState<T>, cur: &SimulationState<T>) -> Result<()> {
        self.record(cur);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{CellAveragedField, Mesh};
    use std::sync::Arc;

    fn synthetic(u_of: impl Fn(f64) -> f64, v_of: impl Fn(f64) -> f64) -> SimulationState<f64> {
        let mesh = Arc::new(Mesh::uniform(0.0, 1.0, 0.01).unwrap());
        let u: CellAveragedField<f64> = mesh.centers().iter().map(|&x| u_of(x)).collect();
        let v: CellAveragedField<f64> = mesh.centers().iter().map(|&x| v_of(x)).collect();
        let n = mesh.len();
        SimulationState::new(0.0, mesh, u, v, CellAveragedField::constant(n, 0.0)).unwrap()
    }

    #[test]
    fn no_gap_in_healthy_tissue() {
        let s = synthetic(|_| 1.0, |_| 0.0);
        let g = detect_gap(&s, 0.01).unwrap();
        assert!(!g.present);
        assert_eq!(g.width, 0.0);
    }

    #[test]
    fn constructed_gap() {
        let s = synthetic(|x| if x > 0.6 { 1.0 } else { 0.0 }, |x| if x < 0.3 { 1.0 } else { 0.0 });
        let g = detect_gap(&s, 0.01).unwrap();
        assert!(g.present);
        assert!((g.left_edge - 0.3).abs() < 1e-12);
        assert!((g.right_edge - 0.6).abs() < 1e-12);
        assert!((g.width - 0.3).abs() < 1e-12);
    }

    #[test]
    fn widest_run_wins() {
        // Two depleted runs separated by a cell with u = 0.1 < 1/2.
        let s = synthetic(
            |x| {
                if x > 0.8 {
                    1.0
                } else if (0.4..0.41).contains(&x) {
                    0.1
                } else {
                    0.0
                }
            },
            |x| if x < 0.3 { 1.0 } else { 0.0 },
        );
        let g = detect_gap(&s, 0.01).unwrap();
        assert!((g.left_edge - 0.41).abs() < 1e-12, "{g:?}");
        assert!((g.right_edge - 0.8).abs() < 1e-12);
    }

    #[test]
    fn threshold_domain() {
        let s = synthetic(|_| 1.0, |_| 0.0);
        assert!(detect_gap(&s, 0.0).is_err());
        assert!(detect_gap(&s, 0.5).is_err());
    }

    #[test]
    fn regimes_on_synthetic_states() {
        let het = synthetic(|x| if x < 0.5 { 0.5 } else { 1.0 }, |x| if x < 0.5 { 1.0 } else { 0.0 });
        let c = classify_invasion(&het, 0.5, 0.05).unwrap();
        assert_eq!(c.regime, InvasionRegime::Heterogeneous);
        assert!((c.residual_u - 0.5).abs() < 1e-15);

        let hom = synthetic(|x| if x > 0.6 { 1.0 } else { 0.0 }, |x| if x < 0.3 { 1.0 } else { 0.0 });
        assert_eq!(
            classify_invasion(&hom, 12.5, 0.05).unwrap().regime,
            InvasionRegime::Homogeneous
        );

        let hyb = synthetic(
            |x| if x > 0.3 { 1.0 } else { 0.0 },
            |x| if x < 0.32 { 1.0 } else { 0.0 },
        );
        assert_eq!(
            classify_invasion(&hyb, 2.5, 0.05).unwrap().regime,
            InvasionRegime::Hybrid
        );

        // A residual of 1 − d is not heterogeneous when d >= 1.
        assert_eq!(
            classify_invasion(&het, 1.5, 0.05).unwrap().regime,
            InvasionRegime::Hybrid
        );
    }

    #[test]
    fn core_cells_at_zero_are_skipped() {
        let s = synthetic(
            |x| {
                if x < 0.1 {
                    0.0
                } else if x < 0.5 {
                    0.48
                } else {
                    1.0
                }
            },
            |x| if x < 0.5 { 1.0 } else { 0.0 },
        );
        let c = classify_invasion(&s, 0.5, 0.05).unwrap();
        assert!((c.residual_u - 0.48).abs() < 1e-15);
        assert_eq!(c.regime, InvasionRegime::Heterogeneous);
    }

    #[test]
    fn missing_front_is_an_error() {
        let s = synthetic(|_| 1.0, |_| 0.0);
        assert!(matches!(
            classify_invasion(&s, 1.0, 0.05),
            Err(Error::Classification(_))
        ));
        let s = synthetic(|_| 0.0, |_| 1.0);
        assert!(matches!(
            classify_invasion(&s, 1.0, 0.05),
            Err(Error::Classification(_))
        ));
    }

    #[test]
    fn regime_names_round_trip() {
        for r in [
            InvasionRegime::Heterogeneous,
            InvasionRegime::Hybrid,
            InvasionRegime::Homogeneous,
        ] {
            assert_eq!(r.as_str().parse::<InvasionRegime>().unwrap(), r);
        }
    }
}
