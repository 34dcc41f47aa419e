use crate::error::{Error, Result};
use crate::mesh::{CellAveragedField, Mesh};
use crate::model::{reaction_u, reaction_v, reaction_w, ModelParameters};
use crate::scalar::Scalar;

use super::{InterfaceAverage, SchemeOptions, SimulationState, TridiagonalSystem};

/// Width-weighted mean `(a_L Δx_L + a_R Δx_R) / (Δx_L + Δx_R)`.
#[inline]
pub fn interface_diffusivity_arithmetic<T: Scalar>(a_left: T, a_right: T, dx_left: T, dx_right: T) -> T {
    if a_left == a_right {
        a_left
    } else if dx_left == dx_right {
        T::lit(0.5) * (a_left + a_right)
    } else {
        (a_left * dx_left + a_right * dx_right) / (dx_left + dx_right)
    }
}

/// Harmonic mean `2 a_L a_R / (a_L + a_R)` of two positive coefficients.
pub fn interface_diffusivity_harmonic<T: Scalar>(a_left: T, a_right: T) -> Result<T> {
    if !(a_left > T::zero()) {
        return Err(Error::domain(
            "a_left",
            a_left.as_f64(),
            "harmonic averaging needs a positive coefficient",
        ));
    }
    if !(a_right > T::zero()) {
        return Err(Error::domain(
            "a_right",
            a_right.as_f64(),
            "harmonic averaging needs a positive coefficient",
        ));
    }
    Ok(T::lit(2.0) * a_left * a_right / (a_left + a_right))
}

/// Acid diffusivity at the `N - 1` interior interfaces.
pub fn interface_coefficients_w<T: Scalar>(a_cells: &[T], average: InterfaceAverage, mesh: &Mesh<T>) -> Result<Vec<T>> {
    check_len("A", a_cells.len(), mesh)?;
    let dx = mesh.widths();
    (0..mesh.len() - 1)
        .map(|i| match average {
            InterfaceAverage::Arithmetic => Ok(interface_diffusivity_arithmetic(
                a_cells[i],
                a_cells[i + 1],
                dx[i],
                dx[i + 1],
            )),
            InterfaceAverage::Harmonic => interface_diffusivity_harmonic(a_cells[i], a_cells[i + 1]),
        })
        .collect()
}

/// Width-weighted average of `1 - u` at the interior interfaces (without the
/// factor `D`).
pub fn interface_coefficients_v<T: Scalar>(u: &[T], mesh: &Mesh<T>) -> Vec<T> {
    let dx = mesh.widths();
    (0..mesh.len() - 1)
        .map(|i| interface_diffusivity_arithmetic(T::one() - u[i], T::one() - u[i + 1], dx[i], dx[i + 1]))
        .collect()
}

/// Finite-volume operator `w ↦ (1/Δx_i)[k_{i+½}(w_{i+1} − w_i)/h_{i+½} − k_{i−½}(w_i − w_{i−1})/h_{i−½}]`
/// with `h` the centre-to-centre distance and zero flux through the two
/// boundary faces.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionOperator<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
}

impl<T: Scalar> DiffusionOperator<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Evaluated in difference form so constants map to exactly zero.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = T::zero();
                if i > 0 {
                    y = y + self.sub[i] * (x[i - 1] - x[i]);
                }
                if i + 1 < n {
                    y = y + self.sup[i] * (x[i + 1] - x[i]);
                }
                y
            })
            .collect()
    }

    /// `(I − dt·L) x = rhs`.
    pub fn implicit_system(&self, dt: T, rhs: Vec<T>) -> TridiagonalSystem<T> {
        TridiagonalSystem {
            sub: self.sub.iter().map(|&s| -dt * s).collect(),
            diag: self.diag.iter().map(|&d| T::one() - dt * d).collect(),
            sup: self.sup.iter().map(|&s| -dt * s).collect(),
            rhs,
        }
    }
}

/// Assembles the operator from interface coefficients `k_{i+½}`, `i = 0..N-2`.
pub fn diffusion_operator<T: Scalar>(coefficients: &[T], mesh: &Mesh<T>) -> DiffusionOperator<T> {
    let n = mesh.len();
    debug_assert_eq!(coefficients.len(), n - 1);
    let dx = mesh.widths();
    let mut op = DiffusionOperator {
        sub: vec![T::zero(); n],
        diag: vec![T::zero(); n],
        sup: vec![T::zero(); n],
    };
    for (i, &k) in coefficients.iter().enumerate() {
        let flux = k / mesh.center_distance(i);
        let left = flux / dx[i];
        let right = flux / dx[i + 1];
        op.sup[i] = left;
        op.diag[i] = op.diag[i] - left;
        op.sub[i + 1] = right;
        op.diag[i + 1] = op.diag[i + 1] - right;
    }
    op
}

fn check_len<T: Scalar>(name: &str, len: usize, mesh: &Mesh<T>) -> Result<()> {
    if len == mesh.len() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "field {name} has {len} values for a mesh of {} cells",
            mesh.len()
        )))
    }
}

/// Semi-discrete right-hand sides `(u', v', w')` of the finite-volume system.
pub fn semidiscrete_rhs<T: Scalar>(
    state: &SimulationState<T>,
    a_cells: &CellAveragedField<T>,
    params: &ModelParameters<T>,
    opts: &SchemeOptions<T>,
) -> Result<(CellAveragedField<T>, CellAveragedField<T>, CellAveragedField<T>)> {
    let mesh = &*state.mesh;
    let (u, v, w) = (&state.u, &state.v, &state.w);

    let du = u
        .iter()
        .zip(w.iter())
        .map(|(&ui, &wi)| reaction_u(ui, wi, params.d))
        .collect();

    let kv: Vec<T> = interface_coefficients_v(u, mesh)
        .into_iter()
        .map(|k| params.diffusivity_ratio * k)
        .collect();
    let lv = diffusion_operator(&kv, mesh).apply(v);
    let dv = v
        .iter()
        .zip(lv)
        .map(|(&vi, li)| reaction_v(vi, params.r) + li)
        .collect();

    let kw = interface_coefficients_w(a_cells, opts.interface_average_w, mesh)?;
    let lw = diffusion_operator(&kw, mesh).apply(w);
    let dw = v
        .iter()
        .zip(w.iter())
        .zip(lw)
        .map(|((&vi, &wi), li)| reaction_w(vi, wi, params.c) + li)
        .collect();

    Ok((du, dv, dw))
}

/// `(I − Δt D L_{1−u}) v^{n+1} = v_expl`, with interface coefficients taken
/// from the already updated `u^{n+1}`.
pub fn assemble_implicit_v<T: Scalar>(
    u_next: &[T],
    v_explicit: &[T],
    params: &ModelParameters<T>,
    opts: &SchemeOptions<T>,
    mesh: &Mesh<T>,
) -> Result<TridiagonalSystem<T>> {
    check_len("v", v_explicit.len(), mesh)?;
    Ok(tumour_operator(u_next, params, mesh)?.implicit_system(opts.dt, v_explicit.to_vec()))
}

/// `D L_{1−u}`; fails if `u > 1` makes an interface coefficient negative.
pub(crate) fn tumour_operator<T: Scalar>(
    u_next: &[T],
    params: &ModelParameters<T>,
    mesh: &Mesh<T>,
) -> Result<DiffusionOperator<T>> {
    check_len("u", u_next.len(), mesh)?;
    let mut k = interface_coefficients_v(u_next, mesh);
    for (i, ki) in k.iter_mut().enumerate() {
        if *ki < T::zero() || !ki.is_finite() {
            return Err(Error::Numerical(format!(
                "negative tumour diffusion coefficient {ki} at interface {i} (u = {}, {}): positivity lost upstream",
                u_next[i],
                u_next[i + 1]
            )));
        }
        *ki = params.diffusivity_ratio * *ki;
    }
    Ok(diffusion_operator(&k, mesh))
}

/// `(I − Δt L_A) w^{n+1} = w_expl`.
pub fn assemble_implicit_w<T: Scalar>(
    a_cells: &[T],
    w_explicit: &[T],
    opts: &SchemeOptions<T>,
    mesh: &Mesh<T>,
) -> Result<TridiagonalSystem<T>> {
    check_len("w", w_explicit.len(), mesh)?;
    let k = interface_coefficients_w(a_cells, opts.interface_average_w, mesh)?;
    Ok(diffusion_operator(&k, mesh).implicit_system(opts.dt, w_explicit.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn opts(dt: f64, avg: InterfaceAverage) -> SchemeOptions<f64> {
        SchemeOptions::new(dt, avg).unwrap()
    }

    #[test]
    fn interface_average_examples() {
        assert_eq!(interface_diffusivity_arithmetic(0.3, 0.3, 0.1, 0.7), 0.3);
        assert!((interface_diffusivity_arithmetic(0.1, 1.0, 0.2, 0.2) - 0.55_f64).abs() < 1e-15);
        assert!((interface_diffusivity_arithmetic(0.1, 1.0, 0.2, 0.6) - 0.775_f64).abs() < 1e-15);

        assert!((interface_diffusivity_harmonic(0.4, 0.4).unwrap() - 0.4_f64).abs() < 1e-16);
        assert!((interface_diffusivity_harmonic(0.1, 1.0).unwrap() - 0.181_818_181_818_181_82_f64).abs() < 1e-15);
        assert_eq!(interface_diffusivity_harmonic(1.0, 3.0).unwrap(), 1.5);
        assert!(interface_diffusivity_harmonic(0.0, 3.0).is_err());
        assert!(interface_diffusivity_harmonic(1.0, -3.0).is_err());
    }

    #[test]
    fn rhs_vanishes_on_equilibria() {
        let mesh = Arc::new(Mesh::uniform(0.0, 1.0, 0.05).unwrap());
        let a = CellAveragedField::new((0..20).map(|i| 0.1 + 0.04 * i as f64).collect());
        let p = ModelParameters::new(12.5, 1.0, 4e-5, 70.0).unwrap();
        for (u, v, w) in [(1.0, 0.0, 0.0), (0.0, 1.0, 1.0)] {
            let s = SimulationState::uniform(0.0, mesh.clone(), u, v, w).unwrap();
            let (du, dv, dw) = semidiscrete_rhs(&s, &a, &p, &opts(0.01, InterfaceAverage::Arithmetic)).unwrap();
            assert!(du.iter().chain(dv.iter()).chain(dw.iter()).all(|&x| x == 0.0));
        }
    }

    #[test]
    fn rhs_hand_stencil_for_v() {
        let mesh = Arc::new(Mesh::uniform(0.0, 5.0, 1.0).unwrap());
        let s = SimulationState::new(
            0.0,
            mesh,
            CellAveragedField::constant(5, 0.0),
            CellAveragedField::new(vec![1.0, 1.0, 0.0, 0.0, 0.0]),
            CellAveragedField::constant(5, 0.0),
        )
        .unwrap();
        let p = ModelParameters::new_unchecked(1.0, 0.0, 1.0, 1.0);
        let a = CellAveragedField::constant(5, 1.0);
        let (_, dv, _) = semidiscrete_rhs(&s, &a, &p, &opts(0.1, InterfaceAverage::Arithmetic)).unwrap();
        assert_eq!(dv.into_inner(), vec![0.0, -1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn implicit_v_structure() {
        let mesh = Mesh::uniform(0.0, 1.0, 0.1).unwrap();
        let p = ModelParameters::new(1.0, 1.0, 4e-3, 70.0).unwrap();
        let o = opts(0.5, InterfaceAverage::Arithmetic);
        let rhs: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();

        let sys = assemble_implicit_v(&[1.0; 10], &rhs, &p, &o, &mesh).unwrap();
        assert!(sys.sub.iter().chain(&sys.sup).all(|&x| x == 0.0));
        assert!(sys.diag.iter().all(|&x| x == 1.0));
        assert_eq!(super::super::solve_tridiagonal(&sys).unwrap().into_inner(), rhs);

        let sys = assemble_implicit_v(&[0.0; 10], &rhs, &p, &o, &mesh).unwrap();
        let lambda = 4e-3 * 0.5 / 0.01;
        for i in 1..9 {
            assert!((sys.sub[i] + lambda).abs() < 1e-14);
            assert!((sys.sup[i] + lambda).abs() < 1e-14);
            assert!((sys.diag[i] - (1.0 + 2.0 * lambda)).abs() < 1e-14);
        }
        assert_eq!(sys.sub[0], 0.0);
        assert!((sys.diag[0] - (1.0 + lambda)).abs() < 1e-14);
        assert!((sys.sup[0] + lambda).abs() < 1e-14);
        assert!(sys.is_strictly_diagonally_dominant());

        let mut bad = [0.5; 10];
        bad[3] = 1.5;
        bad[4] = 1.5;
        assert!(matches!(
            assemble_implicit_v(&bad, &rhs, &p, &o, &mesh),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn implicit_w_structure() {
        let mesh = Mesh::uniform(0.0, 1.0, 0.1).unwrap();
        let rhs = vec![0.0; 10];
        let dt = 0.02;
        let sys = assemble_implicit_w(&[1.0; 10], &rhs, &opts(dt, InterfaceAverage::Arithmetic), &mesh).unwrap();
        let mu = dt / 0.01;
        for i in 1..9 {
            assert!((sys.sub[i] + mu).abs() < 1e-13);
            assert!((sys.diag[i] - (1.0 + 2.0 * mu)).abs() < 1e-13);
        }

        let mut a = [0.1; 10];
        for ai in a.iter_mut().skip(5) {
            *ai = 1.0;
        }
        let k = interface_coefficients_w(&a, InterfaceAverage::Arithmetic, &mesh).unwrap();
        assert!((k[4] - 0.55).abs() < 1e-15);
        assert!(k.iter().enumerate().all(|(i, &x)| i == 4 || x == 0.1 || x == 1.0));
        let k = interface_coefficients_w(&a, InterfaceAverage::Harmonic, &mesh).unwrap();
        assert!((k[4] - 0.2 / 1.1).abs() < 1e-15);
        assert!((k[3] - 0.1).abs() < 1e-16 && (k[5] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonuniform_operator_follows_center_distances() {
        let mesh = Mesh::from_interfaces(vec![0.0, 0.1, 0.3, 0.6, 1.0]).unwrap();
        let a = [1.0, 2.0, 3.0, 4.0];
        let k = interface_coefficients_w(&a, InterfaceAverage::Arithmetic, &mesh).unwrap();
        // (1·0.1 + 2·0.2)/0.3
        assert!((k[0] - 0.5 / 0.3_f64).abs() < 1e-14);
        let op = diffusion_operator(&k, &mesh);
        // Cell 1: width 0.2; distances 0.15 (left) and 0.25 (right).
        assert!((op.sub[1] - k[0] / 0.15 / 0.2_f64).abs() < 1e-12);
        assert!((op.sup[1] - k[1] / 0.25 / 0.2_f64).abs() < 1e-12);
        // Fluxes telescope: Σ Δx_i (L w)_i = 0 for any w.
        let w = [0.3, -1.0, 2.5, 0.7];
        let lw = op.apply(&w);
        let total: f64 = lw.iter().zip(mesh.widths()).map(|(l, dx)| l * dx).sum();
        assert!(total.abs() < 1e-13);
    }
}
