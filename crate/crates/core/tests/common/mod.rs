#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use semilag::interpolation::Interpolant;
use semilag::quadrature::{gauss_legendre, integrate};
use semilag::PeriodicGrid;

/// Real trigonometric polynomial `Σ a_k cos(2πkx) + b_k sin(2πkx)` with exact derivatives.
#[derive(Debug, Clone)]
pub struct TrigPoly {
    pub terms: Vec<(f64, f64, f64)>,
}

impl TrigPoly {
    pub fn random(rng: &mut impl Rng, max_k: usize) -> Self {
        let terms = (1..=max_k)
            .map(|k| (k as f64, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self { terms }
    }

    pub fn sin(k: f64) -> Self {
        Self { terms: vec![(k, 0.0, 1.0)] }
    }

    /// `d`-th derivative at `x`.
    pub fn deriv(&self, d: u32, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(k, a, b)| {
                let w = 2.0 * PI * k;
                let (s, c) = (w * x).sin_cos();
                // derivatives cycle cos -> -sin -> -cos -> sin
                let (dc, ds) = match d % 4 {
                    0 => (c, s),
                    1 => (-s, c),
                    2 => (-c, -s),
                    _ => (s, -c),
                };
                w.powi(d as i32) * (a * dc + b * ds)
            })
            .sum()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.deriv(0, x)
    }

    pub fn node_values(&self, grid: &PeriodicGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&x| self.deriv(0, x)).collect()
    }

    pub fn node_derivs(&self, grid: &PeriodicGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&x| self.deriv(1, x)).collect()
    }
}

/// Non-uniform grid `x_j = j/M + a sin(2πj/M) / (2πM)`, monotone for `|a| < 1`.
pub fn wavy_grid(m: usize, a: f64) -> PeriodicGrid {
    let nodes = (0..m)
        .map(|j| {
            let t = j as f64 / m as f64;
            t + a * (2.0 * PI * t).sin() / (2.0 * PI * m as f64)
        })
        .collect();
    PeriodicGrid::from_nodes(nodes).unwrap()
}

/// `∫_T f` by per-cell Gauss–Legendre.
pub fn cell_integral(grid: &PeriodicGrid, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = gauss_legendre(points);
    (0..grid.len())
        .map(|j| {
            let a = grid.node(j);
            integrate(&rule, a, a + grid.width(j), &f)
        })
        .sum()
}

pub fn l2_diff(grid: &PeriodicGrid, f: &dyn Interpolant, g: impl Fn(f64) -> f64) -> f64 {
    cell_integral(grid, 12, |x| (f.eval(x) - g(x)).powi(2)).sqrt()
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn loglog_slope(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
