use crate::error::{Error, Result};
use crate::mesh::CellAveragedField;
use crate::scalar::Scalar;

/// Tridiagonal system `sub_i x_{i-1} + diag_i x_i + sup_i x_{i+1} = rhs_i`.
///
/// All four vectors have length `n`; `sub[0]` and `sup[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> TridiagonalSystem<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Positive diagonal and `diag_i > |sub_i| + |sup_i|` in every row.
    pub fn is_strictly_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let lo = if i > 0 { self.sub[i].abs() } else { T::zero() };
            let hi = if i + 1 < n { self.sup[i].abs() } else { T::zero() };
            self.diag[i] > T::zero() && self.diag[i] > lo + hi
        })
    }

    /// Matrix-vector product with the system matrix.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y = y + self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    y = y + self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// `‖A x − rhs‖∞`.
    pub fn residual_inf(&self, x: &[T]) -> T {
        self.apply(x)
            .iter()
            .zip(&self.rhs)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Thomas algorithm: forward elimination then back substitution.
pub fn solve_tridiagonal<T: Scalar>(sys: &TridiagonalSystem<T>) -> Result<CellAveragedField<T>> {
    let n = sys.len();
    if n == 0 || sys.sub.len() != n || sys.sup.len() != n || sys.rhs.len() != n {
        return Err(Error::Numerical(format!(
            "malformed tridiagonal system (sub {}, diag {n}, sup {}, rhs {})",
            sys.sub.len(),
            sys.sup.len(),
            sys.rhs.len()
        )));
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];

    let mut pivot = sys.diag[0];
    check_pivot(pivot, 0)?;
    c[0] = if n > 1 { sys.sup[0] / pivot } else { T::zero() };
    d[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.sub[i] * c[i - 1];
        check_pivot(pivot, i)?;
        c[i] = if i + 1 < n { sys.sup[i] / pivot } else { T::zero() };
        d[i] = (sys.rhs[i] - sys.sub[i] * d[i - 1]) / pivot;
    }

    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] = x[i] - c[i] * x[i + 1];
    }
    Ok(CellAveragedField::new(x))
}

fn check_pivot<T: Scalar>(pivot: T, row: usize) -> Result<()> {
    if pivot == T::zero() || !pivot.is_finite() {
        Err(Error::Numerical(format!(
            "zero or non-finite pivot {pivot} at row {row}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(sys: &TridiagonalSystem<f64>) -> Vec<f64> {
        let n = sys.len();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            a[i][i] = sys.diag[i];
            if i > 0 {
                a[i][i - 1] = sys.sub[i];
            }
            if i + 1 < n {
                a[i][i + 1] = sys.sup[i];
            }
            a[i][n] = sys.rhs[i];
        }
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, p);
            let pivot = a[k].clone();
            for row in a.iter_mut().skip(k + 1) {
                let f = row[k] / pivot[k];
                row[k..].iter_mut().zip(&pivot[k..]).for_each(|(x, p)| *x -= f * p);
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (a[i][n] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn identity_returns_rhs() {
        let rhs = vec![0.3, -1.0, 7.5, 2.0];
        let sys = TridiagonalSystem {
            sub: vec![0.0; 4],
            diag: vec![1.0; 4],
            sup: vec![0.0; 4],
            rhs: rhs.clone(),
        };
        assert_eq!(solve_tridiagonal(&sys).unwrap().into_inner(), rhs);
    }

    #[test]
    fn hand_eliminated_three_by_three() {
        let sys = TridiagonalSystem {
            sub: vec![0.0, -1.0, -1.0],
            diag: vec![2.0, 2.0, 2.0],
            sup: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0, 0.0, 1.0],
        };
        let x = solve_tridiagonal(&sys).unwrap();
        for xi in x.iter() {
            assert!((xi - 1.0_f64).abs() < 1e-15);
        }
    }

    #[test]
    fn heat_system_matches_dense_oracle() {
        let n = 8;
        let mu = 0.37;
        let mut sys = TridiagonalSystem {
            sub: vec![-mu; n],
            diag: vec![1.0 + 2.0 * mu; n],
            sup: vec![-mu; n],
            rhs: (0..n).map(|i| (i as f64 * 0.7).sin() + 1.5).collect(),
        };
        sys.sub[0] = 0.0;
        sys.sup[n - 1] = 0.0;
        sys.diag[0] = 1.0 + mu;
        sys.diag[n - 1] = 1.0 + mu;
        let x = solve_tridiagonal(&sys).unwrap();
        let oracle = dense_solve(&sys);
        for (a, b) in x.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let sys = TridiagonalSystem {
            sub: vec![0.0, 1.0, 0.0],
            diag: vec![0.0, 1.0, 1.0],
            sup: vec![1.0, 0.0, 0.0],
            rhs: vec![1.0, 1.0, 1.0],
        };
        assert!(matches!(solve_tridiagonal(&sys), Err(Error::Numerical(_))));
    }

    proptest! {
        #[test]
        fn dominant_systems_solve_to_small_residual(
            rows in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.01f64..2.0, -10.0f64..10.0), 3..64)
        ) {
            let n = rows.len();
            let mut sys = TridiagonalSystem {
                sub: rows.iter().map(|r| r.0).collect(),
                sup: rows.iter().map(|r| r.1).collect(),
                diag: rows.iter().map(|r| r.0.abs() + r.1.abs() + r.2).collect(),
                rhs: rows.iter().map(|r| r.3).collect(),
            };
            sys.sub[0] = 0.0;
            sys.sup[n - 1] = 0.0;
            prop_assert!(sys.is_strictly_diagonally_dominant());
            let x = solve_tridiagonal(&sys).unwrap();
            let scale = sys.rhs.iter().fold(0.0f64, |m, r| m.max(r.abs())).max(1e-300);
            prop_assert!(sys.residual_inf(&x) <= 1e-12 * scale);
        }
    }
}
