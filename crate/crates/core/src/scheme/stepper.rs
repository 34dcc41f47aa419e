use crate::error::{Error, Result};
use crate::mesh::{project_cell_averages, CellAveragedField, DiffusionProfile};
use crate::model::{reaction_u, reaction_v, reaction_w, ModelParameters};
use crate::scalar::Scalar;

use super::operator::{diffusion_operator, interface_coefficients_w, tumour_operator, DiffusionOperator};
use super::{solve_tridiagonal, SchemeOptions, SimulationState};

/// Callback invoked after every accepted step of [`run`].
pub trait Observer<T: Scalar> {
    /// `step` counts from 1 for the first step of the run.
    fn observe(&mut self, step: usize, previous: &SimulationState<T>, current: &SimulationState<T>) -> Result<()>;
}

impl<T, F> Observer<T> for F
where
    T: Scalar,
    F: FnMut(usize, &SimulationState<T>, &SimulationState<T>) -> Result<()>,
{
    fn observe(&mut self, step: usize, previous: &SimulationState<T>, current: &SimulationState<T>) -> Result<()> {
        self(step, previous, current)
    }
}

/// One IMEX scheme instance: the acid operator is fixed by `A` and the mesh,
/// so it is assembled once and reused for every step.
#[derive(Debug, Clone)]
pub struct ImexStepper<T> {
    params: ModelParameters<T>,
    opts: SchemeOptions<T>,
    acid_operator: DiffusionOperator<T>,
}

impl<T: Scalar> ImexStepper<T> {
    pub fn new(
        a_cells: &CellAveragedField<T>,
        params: ModelParameters<T>,
        opts: SchemeOptions<T>,
        mesh: &crate::mesh::Mesh<T>,
    ) -> Result<Self> {
        if let Some(i) = a_cells.iter().position(|&a| !(a > T::zero())) {
            return Err(Error::domain(
                "A",
                a_cells[i].as_f64(),
                "acid diffusivity must be > 0 in every cell",
            ));
        }
        let k = interface_coefficients_w(a_cells, opts.interface_average_w, mesh)?;
        Ok(Self {
            params,
            opts,
            acid_operator: diffusion_operator(&k, mesh),
        })
    }

    pub fn params(&self) -> &ModelParameters<T> {
        &self.params
    }

    pub fn options(&self) -> &SchemeOptions<T> {
        &self.opts
    }

    /// Advances by one step in the order `u → v → w`:
    ///
    /// ```text
    /// u⁺ = u + Δt u(1 − u − d w)
    /// (I − Δt D L_{1−u⁺}) v⁺ = v + Δt r v(1 − v)
    /// (I − Δt L_A) w⁺        = w + Δt c (v − w)
    /// ```
    ///
    /// The caller is responsible for checking the result for finiteness.
    pub fn advance(&self, s: &SimulationState<T>) -> Result<SimulationState<T>> {
        let dt = self.opts.dt;
        let p = &self.params;
        let mesh = &*s.mesh;

        let u_next: CellAveragedField<T> =
            s.u.iter()
                .zip(s.w.iter())
                .map(|(&u, &w)| u + dt * reaction_u(u, w, p.d))
                .collect();

        let v_explicit: Vec<T> = s.v.iter().map(|&v| v + dt * reaction_v(v, p.r)).collect();
        let v_next = implicit_stage(&tumour_operator(&u_next, p, mesh)?, dt, v_explicit)?;

        let w_explicit: Vec<T> =
            s.v.iter()
                .zip(s.w.iter())
                .map(|(&v, &w)| w + dt * reaction_w(v, w, p.c))
                .collect();
        let w_next = implicit_stage(&self.acid_operator, dt, w_explicit)?;

        Ok(SimulationState {
            time: s.time + dt,
            mesh: s.mesh.clone(),
            u: u_next,
            v: v_next,
            w: w_next,
        })
    }

    /// [`advance`](Self::advance) plus the finiteness check, reporting `step`
    /// on failure.
    pub fn step(&self, s: &SimulationState<T>, step: usize) -> Result<SimulationState<T>> {
        let next = self.advance(s).map_err(|e| match e {
            Error::Numerical(detail) => Error::Instability {
                step,
                time: s.time.as_f64(),
                detail,
            },
            other => other,
        })?;
        if !next.is_finite() {
            return Err(Error::Instability {
                step,
                time: next.time.as_f64(),
                detail: "non-finite values in the updated state".into(),
            });
        }
        Ok(next)
    }
}

/// Solves `(I − Δt L) x = b` in increment form, `x = b + δ` with
/// `(I − Δt L) δ = Δt L b`, so states with `L b = 0` are reproduced exactly.
fn implicit_stage<T: Scalar>(op: &DiffusionOperator<T>, dt: T, b: Vec<T>) -> Result<CellAveragedField<T>> {
    let rhs = op.apply(&b).into_iter().map(|l| dt * l).collect();
    let delta = solve_tridiagonal(&op.implicit_system(dt, rhs))?;
    Ok(b.into_iter().zip(delta.iter()).map(|(x, &d)| x + d).collect())
}

/// Single IMEX step from `s`. Errors report step index 1.
pub fn step_imex<T: Scalar>(
    s: &SimulationState<T>,
    a_cells: &CellAveragedField<T>,
    params: &ModelParameters<T>,
    opts: &SchemeOptions<T>,
) -> Result<SimulationState<T>> {
    ImexStepper::new(a_cells, *params, *opts, &s.mesh)?.step(s, 1)
}

/// Number of fixed steps needed to reach `final_time` from `t0`:
/// `ceil((T − t0)/Δt)`, ignoring round-off excess below `1e-9` steps.
pub(crate) fn step_count<T: Scalar>(t0: T, final_time: T, dt: T) -> Result<usize> {
    if final_time < t0 {
        return Err(Error::Config(format!(
            "final time {final_time} precedes the initial time {t0}"
        )));
    }
    let ratio = ((final_time - t0) / dt).as_f64();
    Ok((ratio - 1e-9).ceil().max(0.0) as usize)
}

/// Integrates from `s0` to `final_time` with fixed steps, calling every
/// observer after each step.
pub fn run<T: Scalar>(
    s0: SimulationState<T>,
    profile: &DiffusionProfile<T>,
    params: &ModelParameters<T>,
    opts: &SchemeOptions<T>,
    final_time: T,
    observers: &mut [&mut dyn Observer<T>],
) -> Result<SimulationState<T>> {
    let steps = step_count(s0.time, final_time, opts.dt)?;
    if steps == 0 {
        return Ok(s0);
    }
    let a_cells = project_cell_averages(profile, &s0.mesh)?;
    let stepper = ImexStepper::new(&a_cells, *params, *opts, &s0.mesh)?;
    let t0 = s0.time;
    let mut state = s0;
    for k in 1..=steps {
        let mut next = stepper.step(&state, k)?;
        // t0 + k·Δt avoids accumulating round-off over thousands of steps.
        next.time = t0 + T::from_usize_lossy(k) * opts.dt;
        for obs in observers.iter_mut() {
            obs.observe(k, &state, &next)?;
        }
        state = next;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;
    use crate::scheme::InterfaceAverage;
    use std::sync::Arc;

    fn table_mesh() -> Arc<Mesh<f64>> {
        Arc::new(Mesh::uniform(0.0, 1.0, 0.005).unwrap())
    }

    fn opts() -> SchemeOptions<f64> {
        SchemeOptions::new(0.01, InterfaceAverage::Arithmetic).unwrap()
    }

    #[test]
    fn equilibria_are_fixed_points() {
        let mesh = table_mesh();
        let a = CellAveragedField::constant(mesh.len(), 1.0);
        for (d, (u, v, w)) in [(12.5, (1.0, 0.0, 0.0)), (12.5, (0.0, 1.0, 1.0)), (0.5, (1.0, 0.0, 0.0))] {
            let p = ModelParameters::new(d, 1.0, 4e-5, 70.0).unwrap();
            let s = SimulationState::uniform(0.0, mesh.clone(), u, v, w).unwrap();
            let next = step_imex(&s, &a, &p, &opts()).unwrap();
            assert!(next.max_abs_diff(&s) < 1e-15);
            assert!((next.time - 0.01).abs() < 1e-18);
        }
    }

    #[test]
    fn pure_diffusion_conserves_acid_mass() {
        let mesh = table_mesh();
        let profile = DiffusionProfile::single_jump(0.1, 1.0, 0.625).unwrap();
        let a = project_cell_averages(&profile, &mesh).unwrap();
        let p = ModelParameters::new_unchecked(0.0, 0.0, 4e-5, 0.0);
        let n = mesh.len();
        let w: CellAveragedField<f64> = mesh
            .centers()
            .iter()
            .map(|&x| (-(x - 0.4f64).powi(2) / 0.01).exp())
            .collect();
        let mut s = SimulationState::new(
            0.0,
            mesh.clone(),
            CellAveragedField::constant(n, 0.3),
            CellAveragedField::constant(n, 0.0),
            w,
        )
        .unwrap();
        let stepper = ImexStepper::new(&a, p, opts(), &mesh).unwrap();
        let m0 = s.w.integral(&mesh);
        for k in 1..=50 {
            let next = stepper.step(&s, k).unwrap();
            let (before, after) = (s.w.integral(&mesh), next.w.integral(&mesh));
            assert!((after - before).abs() <= 1e-12 * before.abs());
            s = next;
        }
        assert!((s.w.integral(&mesh) - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn run_with_zero_duration_returns_input() {
        let mesh = table_mesh();
        let s = SimulationState::uniform(3.0, mesh, 0.2, 0.4, 0.1).unwrap();
        let p = ModelParameters::new(1.0, 1.0, 4e-5, 70.0).unwrap();
        let profile = DiffusionProfile::constant(1.0).unwrap();
        let mut calls = 0usize;
        let mut obs = |_: usize, _: &SimulationState<f64>, _: &SimulationState<f64>| {
            calls += 1;
            Ok(())
        };
        let out = run(s.clone(), &profile, &p, &opts(), 3.0, &mut [&mut obs]).unwrap();
        assert_eq!(out, s);
        assert_eq!(calls, 0);
        assert!(run(s, &profile, &p, &opts(), 2.0, &mut []).is_err());
    }

    #[test]
    fn run_counts_steps_and_calls_observers() {
        let mesh = Arc::new(Mesh::uniform(0.0, 1.0, 0.05).unwrap());
        let s = SimulationState::uniform(0.0, mesh, 1.0, 0.0, 0.0).unwrap();
        let p = ModelParameters::new(1.0, 1.0, 4e-5, 70.0).unwrap();
        let profile = DiffusionProfile::constant(1.0).unwrap();
        let mut seen = Vec::new();
        let mut obs = |k: usize, prev: &SimulationState<f64>, cur: &SimulationState<f64>| {
            assert!(cur.time > prev.time);
            seen.push(k);
            Ok(())
        };
        let out = run(s, &profile, &p, &opts(), 0.2, &mut [&mut obs]).unwrap();
        assert_eq!(seen, (1..=20).collect::<Vec<_>>());
        assert!((out.time - 0.2).abs() < 1e-15);
        // Non-divisible horizon rounds up.
        assert_eq!(step_count(0.0, 0.205, 0.01).unwrap(), 21);
        assert_eq!(step_count(0.0, 20.0, 0.01).unwrap(), 2000);
    }

    #[test]
    fn blow_up_is_reported_as_instability() {
        let mesh = Arc::new(Mesh::uniform(0.0, 1.0, 0.1).unwrap());
        let s = SimulationState::uniform(0.0, mesh, 0.5, 0.5, 0.5).unwrap();
        // dt·d far beyond any stability bound drives u to overflow.
        let p = ModelParameters::new(1e150, 1.0, 4e-5, 1.0).unwrap();
        let o = SchemeOptions::new(1e160, InterfaceAverage::Arithmetic).unwrap();
        let profile = DiffusionProfile::constant(1.0).unwrap();
        let err = run(s, &profile, &p, &o, 1e161, &mut []).unwrap_err();
        assert!(matches!(err, Error::Instability { step: 1, .. }), "{err}");
    }

    #[test]
    fn runs_in_single_precision() {
        let mesh = Arc::new(Mesh::<f32>::uniform(0.0, 1.0, 0.01).unwrap());
        let n = mesh.len();
        let v: CellAveragedField<f32> = mesh
            .centers()
            .iter()
            .map(|&x| if x < 0.25 { 1.0 } else { 0.0 })
            .collect();
        let u = v.iter().map(|&x| 1.0 - x).collect();
        let s = SimulationState::new(0.0f32, mesh, u, v, CellAveragedField::constant(n, 0.0)).unwrap();
        let p = ModelParameters::new(12.5f32, 1.0, 4e-5, 70.0).unwrap();
        let o = SchemeOptions::new(0.01f32, InterfaceAverage::Harmonic).unwrap();
        let out = run(s, &DiffusionProfile::constant(1.0f32).unwrap(), &p, &o, 1.0, &mut []).unwrap();
        assert!(out.is_finite());
        assert!(out.min_value() >= -1e-6);
    }
}
