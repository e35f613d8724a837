//! Phase shift of one-step schemes on complex Fourier modes.
//!
//! A scheme is run for one step on `exp(2πikx)` sampled on a uniform grid
//! (real and imaginary parts advanced separately, which is valid because
//! every scheme is linear with real coefficients). The `k`-th DFT
//! coefficient of the result, divided by that of the initial data, is the
//! scheme's symbol at `k`; its negative argument is the phase shift.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::characteristics::ConstantVelocity;
use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::schemes::{step, SchemeKind, SchemeState};

/// `Σ_j v_j exp(−2πi k x_j)` with `x_j = j / M`, unnormalized.
pub fn dft_coefficient(values: &[Complex64], k: i64) -> Result<Complex64> {
    let m = values.len();
    check_wavenumber(k, m)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        // reduce k·j mod M before scaling so the angle stays small
        let r = (k * j as i64).rem_euclid(m as i64) as f64;
        sum += v * Complex64::from_polar(1.0, -2.0 * PI * r / m as f64);
    }
    Ok(sum)
}

/// DFT coefficient of real data.
pub fn dft_coefficient_real(values: &[f64], k: i64) -> Result<Complex64> {
    let c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_coefficient(&c, k)
}

fn check_wavenumber(k: i64, m: usize) -> Result<()> {
    if m == 0 || k.unsigned_abs() as usize > m / 2 {
        return Err(Error::Wavenumber { k, nyquist: m / 2 });
    }
    Ok(())
}

/// One row of a phase study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub scheme: SchemeKind,
    pub k: i64,
    /// `k h`, in `(0, 1/2]` for the positive wavenumbers of a sweep.
    pub kh: f64,
    /// Measured phase shift in `(−π, π]`.
    pub theta: f64,
    /// `theta` made continuous in `k` across a sweep.
    pub theta_unwrapped: f64,
    /// `2π μ k h`.
    pub theta_exact: f64,
    /// Modulus of the symbol.
    pub amplification: f64,
}

/// Maps an angle into `(−π, π]`.
fn principal(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `exp(2πik x_j)` at the nodes of the uniform `M`-grid.
fn mode(m: usize, k: i64) -> Vec<Complex64> {
    (0..m as i64)
        .map(|j| {
            // phase from the integer k·j mod M
            let r = (k * j).rem_euclid(m as i64) as f64;
            Complex64::from_polar(1.0, 2.0 * PI * r / m as f64)
        })
        .collect()
}

/// Output of one step of `kind` on `exp(2πikx)` at CFL number `mu`.
///
/// The step uses velocity `u = μ` and `Δt = h`, so the displacement is
/// `μ h`. CIP is seeded with the analytic derivative `2πik exp(2πikx)`.
pub fn one_step_mode(kind: SchemeKind, m: usize, mu: f64, k: i64) -> Result<Vec<Complex64>> {
    let grid = Arc::new(PeriodicGrid::uniform(m)?);
    check_wavenumber(k, m)?;
    if !mu.is_finite() {
        return Err(Error::NonFinite(mu));
    }
    let h = grid.h_max();
    let kw = 2.0 * PI * k as f64;
    let seed = mode(m, k);
    let re = seed.iter().map(|z| z.re).collect();
    let im = seed.iter().map(|z| z.im).collect();
    // d/dx exp(2πikx) = 2πik exp(2πikx)
    let dre = seed.iter().map(|z| -kw * z.im).collect();
    let dim = seed.iter().map(|z| kw * z.re).collect();
    let (dre, dim) = if kind.carries_derivs() { (Some(dre), Some(dim)) } else { (None, None) };
    let vel = ConstantVelocity(mu);
    let real = step(kind, &SchemeState::new(grid.clone(), 0.0, re, dre)?, &vel, h)?;
    let imag = step(kind, &SchemeState::new(grid, 0.0, im, dim)?, &vel, h)?;
    Ok(real.values.iter().zip(&imag.values).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

/// Symbol of one step of `kind` at wavenumber `k`.
pub fn symbol(kind: SchemeKind, m: usize, mu: f64, k: i64) -> Result<Complex64> {
    let out = one_step_mode(kind, m, mu, k)?;
    Ok(dft_coefficient(&out, k)? / dft_coefficient(&mode(m, k), k)?)
}

/// Phase shift and amplification of one step of `kind` on mode `k`.
pub fn phase_shift(kind: SchemeKind, m: usize, mu: f64, k: i64) -> Result<PhaseRow> {
    let ratio = symbol(kind, m, mu, k)?;
    let theta = principal(-ratio.arg());
    let kh = k as f64 / m as f64;
    Ok(PhaseRow {
        scheme: kind,
        k,
        kh,
        theta,
        theta_unwrapped: theta,
        theta_exact: 2.0 * PI * mu * kh,
        amplification: ratio.norm(),
    })
}

/// Phase rows for every scheme and `k = 1..=M/2`, ordered by scheme then `k`.
pub fn phase_table(kinds: &[SchemeKind], m: usize, mu: f64) -> Result<Vec<PhaseRow>> {
    let mut rows = Vec::with_capacity(kinds.len() * (m / 2));
    for &kind in kinds {
        let mut prev: Option<f64> = None;
        for k in 1..=(m / 2) as i64 {
            let mut row = phase_shift(kind, m, mu, k)?;
            let anchor = prev.unwrap_or(row.theta_exact);
            row.theta_unwrapped = row.theta + 2.0 * PI * ((anchor - row.theta) / (2.0 * PI)).round();
            prev = Some(row.theta_unwrapped);
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_of_constant() {
        let v = vec![Complex64::new(1.0, 0.0); 16];
        assert!((dft_coefficient(&v, 0).unwrap() - Complex64::new(16.0, 0.0)).norm() < 1e-13);
        assert!(dft_coefficient(&v, 1).unwrap().norm() < 1e-12 * 16.0);
        assert!(dft_coefficient(&v, 9).is_err());
        assert!(dft_coefficient(&v, -8).is_ok());
    }

    #[test]
    fn dft_of_cosine() {
        let m = 40;
        let v: Vec<f64> = (0..m).map(|j| (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let c = dft_coefficient_real(&v, 1).unwrap();
        assert!((c - Complex64::new(20.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn principal_range() {
        assert_eq!(principal(-PI), PI);
        assert!((principal(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(principal(0.25), 0.25);
    }

    #[test]
    fn upwind_closed_form() {
        let (m, mu) = (40, 0.4);
        for k in 1..=20 {
            let row = phase_shift(SchemeKind::Upwind, m, mu, k).unwrap();
            let kh = k as f64 / m as f64;
            let sym = Complex64::new(1.0 - mu, 0.0) + mu * Complex64::from_polar(1.0, -2.0 * PI * kh);
            assert!((row.theta - principal(-sym.arg())).abs() < 1e-10, "k={k}");
            assert!((row.amplification - sym.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn wavenumber_out_of_range() {
        assert!(phase_shift(SchemeKind::Cip, 40, 0.4, 21).is_err());
    }

    #[test]
    fn table_shape() {
        let rows = phase_table(&SchemeKind::ALL, 40, 0.4).unwrap();
        assert_eq!(rows.len(), 80);
        for r in &rows {
            assert!((r.theta_exact - 2.0 * PI * 0.4 * r.kh).abs() < 1e-15);
            assert!(r.theta > -PI && r.theta <= PI);
            assert!(r.amplification >= 0.0);
        }
    }
}
