//! Thomas forward-elimination / back-substitution for strictly diagonally
//! dominant tridiagonal systems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves a tridiagonal system `A x = rhs`.
///
/// Layout: `sub[i]`, `diag[i]`, `sup[i]` are the coefficients of row `i`
/// (`sub[0]` and `sup[n-1]` are ignored). Strict diagonal dominance is
/// required on every row; a violating row aborts with `SolverBreakdown`
/// naming `system`, instead of being regularized.
pub fn solve<T: Scalar>(
    system: &'static str,
    sub: &[T],
    diag: &[T],
    sup: &[T],
    rhs: &[T],
) -> Result<Vec<T>> {
    let n = rhs.len();
    assert!(n > 0, "empty tridiagonal system");
    assert_eq!(sub.len(), n);
    assert_eq!(diag.len(), n);
    assert_eq!(sup.len(), n);

    for i in 0..n {
        let a = if i > 0 { sub[i].abs() } else { T::zero() };
        let c = if i + 1 < n { sup[i].abs() } else { T::zero() };
        let margin = diag[i].abs() - a - c;
        if !(margin > T::zero()) {
            return Err(Error::SolverBreakdown {
                system,
                row: i,
                margin: margin.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let mut c_prime = vec![T::zero(); n];
    let mut d_prime = vec![T::zero(); n];

    c_prime[0] = sup[0] / diag[0];
    d_prime[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c_prime[i - 1];
        if i + 1 < n {
            c_prime[i] = sup[i] / den;
        }
        d_prime[i] = (rhs[i] - sub[i] * d_prime[i - 1]) / den;
    }

    let mut x = vec![T::zero(); n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let n = 5;
        let sub: Vec<f64> = vec![0.0; n];
        let diag = vec![1.0; n];
        let sup = vec![0.0; n];
        let rhs = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let x = solve("test", &sub, &diag, &sup, &rhs).unwrap();
        for i in 0..n {
            assert!((x[i] - rhs[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn laplacian_like_system_satisfies_residual() {
        let n = 6;
        let sub: Vec<f64> = vec![-1.0; n];
        let diag = vec![2.5; n];
        let sup = vec![-1.0; n];
        let rhs = vec![1.0, 0.0, 2.0, -1.0, 0.5, 1.0];
        let x = solve("test", &sub, &diag, &sup, &rhs).unwrap();
        for i in 0..n {
            let mut ax = diag[i] * x[i];
            if i > 0 {
                ax += sub[i] * x[i - 1];
            }
            if i + 1 < n {
                ax += sup[i] * x[i + 1];
            }
            assert!((ax - rhs[i]).abs() < 1e-12, "row {i}");
        }
    }

    #[test]
    fn zero_rhs_gives_exact_zero() {
        let n = 8;
        let sub: Vec<f64> = vec![-0.7; n];
        let diag = vec![3.0; n];
        let sup = vec![-0.9; n];
        let rhs = vec![0.0; n];
        let x = solve("test", &sub, &diag, &sup, &rhs).unwrap();
        assert!(x.iter().all(|&xi| xi == 0.0));
    }

    #[test]
    fn dominance_loss_is_surfaced() {
        let sub = vec![0.0, -1.0, -1.0];
        let diag = vec![2.0, 1.5, 2.0];
        let sup = vec![-1.0, -1.0, 0.0];
        let rhs = vec![1.0, 1.0, 1.0];
        let err = solve("momentum", &sub, &diag, &sup, &rhs).unwrap_err();
        match err {
            Error::SolverBreakdown { system, row, .. } => {
                assert_eq!(system, "momentum");
                assert_eq!(row, 1);
            }
            other => panic!("expected SolverBreakdown, got {other:?}"),
        }
    }
}
