//! Banded solvers for the periodic spline system.

use crate::error::{Error, Result};

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `sub[i]` multiplies `x[i-1]` (so `sub[0]` is ignored) and `sup[i]`
/// multiplies `x[i+1]` (`sup[n-1]` is ignored).
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: rhs.len().min(sub.len()).min(sup.len()) });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut gam = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut bet = diag[0];
    if bet == 0.0 {
        return Err(Error::Singular);
    }
    x[0] = rhs[0] / bet;
    for i in 1..n {
        gam[i] = sup[i - 1] / bet;
        bet = diag[i] - sub[i] * gam[i];
        if bet == 0.0 {
            return Err(Error::Singular);
        }
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / bet;
    }
    for i in (0..n - 1).rev() {
        x[i] -= gam[i + 1] * x[i + 1];
    }
    Ok(x)
}

/// Solves a cyclic tridiagonal system by Sherman–Morrison reduction to two
/// Thomas solves. Row `i` reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// with indices taken modulo `n`; requires `n >= 3`.
pub fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cyclic system of size {n}")));
    }
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: rhs.len().min(sub.len()).min(sup.len()) });
    }
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;

    let x = solve_tridiagonal(sub, &bb, sup, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &bb, sup, &u)?;

    let denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
    if denom == 0.0 {
        return Err(Error::Singular);
    }
    let fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}
