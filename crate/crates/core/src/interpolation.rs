//! Piecewise-cubic interpolation on periodic grids.
//!
//! Three operators share one evaluation interface:
//!
//! * [`HermiteFn`]: the C¹ cubic Hermite interpolant of node values and
//!   node derivatives (the CIP closure).
//! * [`SplineFn`]: the C² periodic cubic spline of node values. It is stored
//!   in Hermite form, i.e. with solved node derivatives, so it evaluates
//!   through the same cell kernel as [`HermiteFn`].
//! * [`LagrangeFn`]: symmetric 4-point cubic Lagrange interpolation on a
//!   uniform grid, using the stencil `{j-1, j, j+1, j+2}` on cell `j`.

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::linalg::solve_cyclic_tridiagonal;
use crate::quadrature::{gauss_legendre, integrate};

/// Point evaluation of a piecewise-polynomial function on the unit circle.
///
/// Second derivatives are double-valued at nodes; the right limit (the value
/// from cell `j` at `x_j`) is returned.
pub trait Interpolant {
    fn grid(&self) -> &PeriodicGrid;
    fn eval(&self, x: f64) -> f64;
    fn eval_deriv(&self, x: f64) -> f64;
    fn eval_deriv2(&self, x: f64) -> f64;

    /// Value and first derivative in one cell lookup.
    fn eval_with_deriv(&self, x: f64) -> (f64, f64) {
        (self.eval(x), self.eval_deriv(x))
    }
}

#[derive(Debug, Clone, Copy)]
struct HermiteCell {
    f0: f64,
    f1: f64,
    d0: f64,
    d1: f64,
    h: f64,
}

impl HermiteCell {
    #[inline]
    fn value(&self, s: f64) -> f64 {
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.f0 * h00 + self.f1 * h01 + self.h * (self.d0 * h10 + self.d1 * h11)
    }

    #[inline]
    fn deriv(&self, s: f64) -> f64 {
        let s2 = s * s;
        let dh00 = 6.0 * s2 - 6.0 * s;
        let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
        let dh11 = 3.0 * s2 - 2.0 * s;
        (self.f0 - self.f1) * dh00 / self.h + self.d0 * dh10 + self.d1 * dh11
    }

    #[inline]
    fn deriv2(&self, s: f64) -> f64 {
        let h = self.h;
        ((self.f0 - self.f1) * (12.0 * s - 6.0) / h + self.d0 * (6.0 * s - 4.0) + self.d1 * (6.0 * s - 2.0)) / h
    }
}

fn check_len(grid: &PeriodicGrid, v: &[f64]) -> Result<()> {
    if v.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: v.len() });
    }
    Ok(())
}

#[inline]
fn hermite_cell(grid: &PeriodicGrid, values: &[f64], derivs: &[f64], x: f64) -> (HermiteCell, f64) {
    let (j, s) = grid.locate_local(x);
    let k = if j + 1 == values.len() { 0 } else { j + 1 };
    let cell = HermiteCell { f0: values[j], f1: values[k], d0: derivs[j], d1: derivs[k], h: grid.width(j) };
    (cell, s)
}

/// C¹ piecewise cubic matching prescribed node values and derivatives.
#[derive(Debug, Clone)]
pub struct HermiteFn<'g> {
    grid: &'g PeriodicGrid,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl<'g> HermiteFn<'g> {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }
}

/// Builds the cubic Hermite interpolant with `f(x_j) = values[j]` and `f'(x_j) = derivs[j]`.
pub fn hermite_interpolate<'g>(grid: &'g PeriodicGrid, values: &[f64], derivs: &[f64]) -> Result<HermiteFn<'g>> {
    check_len(grid, values)?;
    check_len(grid, derivs)?;
    Ok(HermiteFn { grid, values: values.to_vec(), derivs: derivs.to_vec() })
}

impl Interpolant for HermiteFn<'_> {
    fn grid(&self) -> &PeriodicGrid {
        self.grid
    }

    fn eval(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.derivs, x);
        c.value(s)
    }

    fn eval_deriv(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.derivs, x);
        c.deriv(s)
    }

    fn eval_deriv2(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.derivs, x);
        c.deriv2(s)
    }

    fn eval_with_deriv(&self, x: f64) -> (f64, f64) {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.derivs, x);
        (c.value(s), c.deriv(s))
    }
}

/// C² periodic cubic spline through prescribed node values.
#[derive(Debug, Clone)]
pub struct SplineFn<'g> {
    grid: &'g PeriodicGrid,
    values: Vec<f64>,
    node_derivs: Vec<f64>,
}

impl<'g> SplineFn<'g> {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First derivatives at the nodes, as solved from the C² continuity system.
    pub fn node_derivs(&self) -> &[f64] {
        &self.node_derivs
    }
}

/// Builds the periodic cubic spline interpolant of `values`.
///
/// Continuity of the second derivative at node `j` gives
/// `d_{j-1}/h_{j-1} + 2 (1/h_{j-1} + 1/h_j) d_j + d_{j+1}/h_j
///   = 3 (Δ_{j-1}/h_{j-1}² + Δ_j/h_j²)` with `Δ_j = F_{j+1} - F_j`,
/// a strictly diagonally dominant cyclic tridiagonal system in the node
/// derivatives `d_j`.
pub fn spline_interpolate<'g>(grid: &'g PeriodicGrid, values: &[f64]) -> Result<SplineFn<'g>> {
    check_len(grid, values)?;
    let m = grid.len();
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for j in 0..m {
        let jm = (j + m - 1) % m;
        let jp = (j + 1) % m;
        let hl = grid.width(jm);
        let hr = grid.width(j);
        sub[j] = 1.0 / hl;
        sup[j] = 1.0 / hr;
        diag[j] = 2.0 * (1.0 / hl + 1.0 / hr);
        rhs[j] = 3.0 * ((values[j] - values[jm]) / (hl * hl) + (values[jp] - values[j]) / (hr * hr));
    }
    let node_derivs = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs)?;
    Ok(SplineFn { grid, values: values.to_vec(), node_derivs })
}

impl Interpolant for SplineFn<'_> {
    fn grid(&self) -> &PeriodicGrid {
        self.grid
    }

    fn eval(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.node_derivs, x);
        c.value(s)
    }

    fn eval_deriv(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.node_derivs, x);
        c.deriv(s)
    }

    fn eval_deriv2(&self, x: f64) -> f64 {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.node_derivs, x);
        c.deriv2(s)
    }

    fn eval_with_deriv(&self, x: f64) -> (f64, f64) {
        let (c, s) = hermite_cell(self.grid, &self.values, &self.node_derivs, x);
        (c.value(s), c.deriv(s))
    }
}

/// Symmetric cubic Lagrange interpolant on a uniform grid.
#[derive(Debug, Clone)]
pub struct LagrangeFn<'g> {
    grid: &'g PeriodicGrid,
    values: Vec<f64>,
}

pub fn lagrange_interpolate<'g>(grid: &'g PeriodicGrid, values: &[f64]) -> Result<LagrangeFn<'g>> {
    if !grid.is_uniform() {
        return Err(Error::NonUniformGrid);
    }
    check_len(grid, values)?;
    Ok(LagrangeFn { grid, values: values.to_vec() })
}

impl LagrangeFn<'_> {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Power-basis coefficients in the local coordinate `s` of the cell containing `x`.
    #[inline]
    fn cell_poly(&self, x: f64) -> ([f64; 4], f64, f64) {
        let (j, s) = self.grid.locate_local(x);
        let m = self.values.len();
        let fm = self.values[(j + m - 1) % m];
        let f0 = self.values[j];
        let f1 = self.values[(j + 1) % m];
        let f2 = self.values[(j + 2) % m];
        let a1 = -fm / 3.0 - f0 / 2.0 + f1 - f2 / 6.0;
        let a2 = (fm + f1) / 2.0 - f0;
        let a3 = (f2 - fm) / 6.0 + (f0 - f1) / 2.0;
        ([f0, a1, a2, a3], s, self.grid.width(j))
    }
}

/// Weights of the 4-point stencil `{j-1, j, j+1, j+2}` at local coordinate `s`.
pub fn lagrange_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

impl Interpolant for LagrangeFn<'_> {
    fn grid(&self) -> &PeriodicGrid {
        self.grid
    }

    fn eval(&self, x: f64) -> f64 {
        let (a, s, _) = self.cell_poly(x);
        a[0] + s * (a[1] + s * (a[2] + s * a[3]))
    }

    fn eval_deriv(&self, x: f64) -> f64 {
        let (a, s, h) = self.cell_poly(x);
        (a[1] + s * (2.0 * a[2] + s * 3.0 * a[3])) / h
    }

    fn eval_deriv2(&self, x: f64) -> f64 {
        let (a, s, h) = self.cell_poly(x);
        (2.0 * a[2] + 6.0 * a[3] * s) / (h * h)
    }
}

/// Outcome of [`unboundedness_witness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessRatio {
    /// `‖I v_n‖_{L²}`, equal to 1 since `I v_n` is the constant 1.
    pub interpolant_norm: f64,
    /// `‖v_n‖_{L²}`.
    pub function_norm: f64,
    pub ratio: f64,
}

/// Per-cell profile `v(s) = 1 - 8 s² (1 - s)²`: equal to 1 with zero slope
/// at both cell ends, dipping to 1/2 at mid-cell.
fn witness_profile(s: f64) -> f64 {
    let q = s * (1.0 - s);
    1.0 - 8.0 * q * q
}

fn witness_profile_deriv(s: f64) -> f64 {
    -16.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
}

/// Shows the Hermite operator is unbounded in L²: `v_n = v^n` shrinks in L²
/// as `n` grows while `I v_n ≡ 1`. Returns `‖I v_n‖ / ‖v_n‖`.
pub fn unboundedness_witness(grid: &PeriodicGrid, n: u64) -> Result<WitnessRatio> {
    if n == 0 {
        return Err(Error::InvalidArgument("witness power must be >= 1".into()));
    }
    let m = grid.len();
    let exp = n as f64;

    // Nodal data of v_n: v^n = 1 and D(v^n) = n v^(n-1) v' = 0 at every node.
    let values = vec![witness_profile(0.0).powf(exp); m];
    let derivs: Vec<f64> = (0..m)
        .map(|j| exp * witness_profile(0.0).powf(exp - 1.0) * witness_profile_deriv(0.0) / grid.width(j))
        .collect();
    let interp = hermite_interpolate(grid, &values, &derivs)?;

    let rule = gauss_legendre(12);
    let mut num_sq = 0.0;
    for j in 0..m {
        let (a, h) = (grid.node(j), grid.width(j));
        num_sq += integrate(&rule, a, a + h, |x| interp.eval(x).powi(2));
    }

    // ∫ v^(2n) over one cell in the local variable; the integrand concentrates
    // near the cell ends with width ~ n^(-1/2), so the half-cell is split
    // geometrically toward s = 0 and the profile's symmetry covers the rest.
    let power = 2.0 * exp;
    let f = |s: f64| (power * witness_profile(s).ln()).exp();
    let mut half = 0.0;
    let mut hi = 0.5;
    for _ in 0..80 {
        let lo = hi * 0.5;
        half += integrate(&rule, lo, hi, f);
        hi = lo;
    }
    half += integrate(&rule, 0.0, hi, f);
    // every cell contributes h_j times the same local integral and Σ h_j = 1
    let total_width: f64 = grid.widths().iter().sum();
    let den_sq = 2.0 * half * total_width;

    let interpolant_norm = num_sq.sqrt();
    let function_norm = den_sq.sqrt();
    Ok(WitnessRatio { interpolant_norm, function_norm, ratio: interpolant_norm / function_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sin_data(grid: &PeriodicGrid) -> (Vec<f64>, Vec<f64>) {
        let v = grid.nodes().iter().map(|&x| (2.0 * PI * x).sin()).collect();
        let d = grid.nodes().iter().map(|&x| 2.0 * PI * (2.0 * PI * x).cos()).collect();
        (v, d)
    }

    #[test]
    fn hermite_constant() {
        let g = PeriodicGrid::uniform(10).unwrap();
        let f = hermite_interpolate(&g, &[1.0; 10], &[0.0; 10]).unwrap();
        for i in 0..100 {
            let x = i as f64 / 100.0 + 0.003;
            assert_eq!(f.eval(x), 1.0);
            assert_eq!(f.eval_deriv(x), 0.0);
            assert_eq!(f.eval_deriv2(x), 0.0);
        }
    }

    #[test]
    fn hermite_length_mismatch() {
        let g = PeriodicGrid::uniform(10).unwrap();
        assert!(hermite_interpolate(&g, &[1.0; 9], &[0.0; 10]).is_err());
        assert!(hermite_interpolate(&g, &[1.0; 10], &[0.0; 11]).is_err());
        assert!(spline_interpolate(&g, &[1.0; 9]).is_err());
    }

    #[test]
    fn hermite_unit_derivative_at_origin() {
        let g = PeriodicGrid::uniform(8).unwrap();
        let mut d = vec![0.0; 8];
        d[0] = 1.0;
        let f = hermite_interpolate(&g, &[0.0; 8], &d).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval_deriv(0.0), 1.0);
    }

    #[test]
    fn hermite_reproduces_cubic_on_a_cell() {
        let g = PeriodicGrid::from_nodes(vec![0.0, 0.13, 0.4, 0.45, 0.8]).unwrap();
        let p = |x: f64| 2.0 - 3.0 * x + 5.0 * x * x - 7.0 * x * x * x;
        let dp = |x: f64| -3.0 + 10.0 * x - 21.0 * x * x;
        let d2p = |x: f64| 10.0 - 42.0 * x;
        let values: Vec<f64> = g.nodes().iter().map(|&x| p(x)).collect();
        let derivs: Vec<f64> = g.nodes().iter().map(|&x| dp(x)).collect();
        let f = hermite_interpolate(&g, &values, &derivs).unwrap();
        // cells not touching the wrap-around carry the global cubic
        for j in 0..4 {
            for i in 0..=10 {
                let x = g.node(j) + g.width(j) * i as f64 / 10.5;
                assert!((f.eval(x) - p(x)).abs() < 1e-14);
                assert!((f.eval_deriv(x) - dp(x)).abs() < 1e-13);
                assert!((f.eval_deriv2(x) - d2p(x)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn lagrange_reproduces_cubic_on_a_cell() {
        let g = PeriodicGrid::uniform(12).unwrap();
        let p = |x: f64| 1.0 + x - 4.0 * x * x + 2.5 * x * x * x;
        let dp = |x: f64| 1.0 - 8.0 * x + 7.5 * x * x;
        let values: Vec<f64> = g.nodes().iter().map(|&x| p(x)).collect();
        let f = lagrange_interpolate(&g, &values).unwrap();
        // cells 1..=9 have stencils that do not wrap
        for j in 1..10 {
            for i in 0..10 {
                let x = g.node(j) + g.width(j) * (i as f64 + 0.3) / 10.0;
                assert!((f.eval(x) - p(x)).abs() < 1e-14);
                assert!((f.eval_deriv(x) - dp(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lagrange_rejects_non_uniform() {
        let g = PeriodicGrid::from_nodes(vec![0.0, 0.25, 0.5, 0.75]).unwrap();
        assert_eq!(lagrange_interpolate(&g, &[0.0; 4]).unwrap_err(), Error::NonUniformGrid);
    }

    #[test]
    fn lagrange_matches_basis_oracle() {
        let m = 40;
        let g = PeriodicGrid::uniform(m).unwrap();
        let values: Vec<f64> = g.nodes().iter().map(|&x| (2.0 * PI * x).cos()).collect();
        let f = lagrange_interpolate(&g, &values).unwrap();
        for j in 0..m {
            let x = g.node(j) + 0.5 / m as f64;
            // direct Lagrange basis over the centered stencil
            let stencil: Vec<f64> = (-1i64..=2).map(|o| o as f64).collect();
            let t = 0.5;
            let mut oracle = 0.0;
            for (a, &xa) in stencil.iter().enumerate() {
                let mut l = 1.0;
                for (b, &xb) in stencil.iter().enumerate() {
                    if a != b {
                        l *= (t - xb) / (xa - xb);
                    }
                }
                oracle += l * values[(j as i64 + xa as i64).rem_euclid(m as i64) as usize];
            }
            assert!((f.eval(x) - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn lagrange_weights_match_polynomial_form() {
        let g = PeriodicGrid::uniform(16).unwrap();
        let values: Vec<f64> = (0..16).map(|j| ((j * 7 % 5) as f64).sqrt()).collect();
        let f = lagrange_interpolate(&g, &values).unwrap();
        let s = 0.37;
        let j = 6;
        let w = lagrange_weights(s);
        let direct: f64 = (0..4).map(|i| w[i] * values[j - 1 + i]).sum();
        assert!((f.eval(g.node(j) + s / 16.0) - direct).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spline_constant() {
        let g = PeriodicGrid::uniform(9).unwrap();
        let f = spline_interpolate(&g, &[2.5; 9]).unwrap();
        assert!(f.node_derivs().iter().all(|&d| d.abs() < 1e-14));
        assert!((f.eval(0.321) - 2.5).abs() < 1e-15);
    }

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs())).unwrap();
            a.swap(c, p);
            b.swap(c, p);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    #[test]
    fn spline_impulse_matches_dense_c2_system() {
        let m = 8;
        let g = PeriodicGrid::uniform(m).unwrap();
        let mut values = vec![0.0; m];
        values[0] = 1.0;
        let f = spline_interpolate(&g, &values).unwrap();

        // Oracle: 8 cells × 4 power-basis coefficients, interpolation and C¹/C² matching.
        let n = 4 * m;
        let mut a = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        let h = 1.0 / m as f64;
        let mut row = 0;
        for j in 0..m {
            let k = (j + 1) % m;
            // p_j(0) = F_j, p_j(h) = F_{j+1}
            a[row][4 * j] = 1.0;
            b[row] = values[j];
            row += 1;
            for p in 0..4 {
                a[row][4 * j + p] = h.powi(p as i32);
            }
            b[row] = values[k];
            row += 1;
            // p_j'(h) = p_k'(0), p_j''(h) = p_k''(0)
            for p in 1..4 {
                a[row][4 * j + p] = p as f64 * h.powi(p as i32 - 1);
            }
            a[row][4 * k + 1] -= 1.0;
            row += 1;
            for p in 2..4 {
                a[row][4 * j + p] = (p * (p - 1)) as f64 * h.powi(p as i32 - 2);
            }
            a[row][4 * k + 2] -= 2.0;
            row += 1;
        }
        let coef = dense_solve(a, b);
        for j in 0..m {
            assert!((coef[4 * j + 1] - f.node_derivs()[j]).abs() < 1e-10, "node {j}");
        }
        let sum: f64 = f.node_derivs().iter().sum();
        assert!(sum.abs() < 1e-12);
    }

    #[test]
    fn spline_is_c2_at_nodes() {
        let g = PeriodicGrid::from_nodes(vec![0.0, 0.07, 0.2, 0.41, 0.5, 0.66, 0.9]).unwrap();
        let values: Vec<f64> = g.nodes().iter().map(|&x| (2.0 * PI * x).sin() + x * x).collect();
        let f = spline_interpolate(&g, &values).unwrap();
        let m = g.len();
        for j in 0..m {
            let left = (j + m - 1) % m;
            let cell = HermiteCell {
                f0: values[left],
                f1: values[j],
                d0: f.node_derivs()[left],
                d1: f.node_derivs()[j],
                h: g.width(left),
            };
            let from_left = cell.deriv2(1.0);
            let from_right = f.eval_deriv2(g.node(j));
            assert!((from_left - from_right).abs() < 1e-9 * from_right.abs().max(1.0), "node {j}");
            assert!((f.eval_deriv(g.node(j)) - f.node_derivs()[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn nodal_exactness_all_interpolants() {
        let g = PeriodicGrid::uniform(24).unwrap();
        let (v, d) = sin_data(&g);
        let h = hermite_interpolate(&g, &v, &d).unwrap();
        let s = spline_interpolate(&g, &v).unwrap();
        let l = lagrange_interpolate(&g, &v).unwrap();
        for (j, &x) in g.nodes().iter().enumerate() {
            assert_eq!(h.eval(x), v[j]);
            assert_eq!(h.eval_deriv(x), d[j]);
            assert_eq!(s.eval(x), v[j]);
            assert_eq!(l.eval(x), v[j]);
        }
    }

    #[test]
    fn witness_numerator_is_one() {
        let g = PeriodicGrid::from_nodes(vec![0.0, 0.1, 0.3, 0.55, 0.6]).unwrap();
        for n in [1, 7, 1000] {
            let w = unboundedness_witness(&g, n).unwrap();
            assert!((w.interpolant_norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn witness_first_power_exceeds_one() {
        let g = PeriodicGrid::uniform(10).unwrap();
        let w = unboundedness_witness(&g, 1).unwrap();
        // ∫_0^1 (1 - 8 s²(1-s)²)² ds = 1 - 16/30 + 64/630
        let exact = 1.0 - 16.0 / 30.0 + 64.0 / 630.0;
        assert!((w.function_norm.powi(2) - exact).abs() < 1e-14);
        assert!(w.ratio > 1.0);
        assert!(unboundedness_witness(&g, 0).is_err());
    }
}
