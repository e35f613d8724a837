//! Backtracing of characteristic curves `dξ/ds = u(ξ, s)`, `ξ(t) = x`.
//!
//! [`rk3_backtrace`] is the per-step tracer used by the schemes: a
//! third-order Runge–Kutta step run backward in time on the augmented pair
//! `(ξ, ξ_x)` with field `(u(y₀, t), y₁ u_x(y₀, t))`.
//! [`reference_backtrace`] integrates the same system (plus the second
//! variational equation for `ξ_xx`) with classical RK4 under step halving
//! and serves as the exact-solution oracle.

use std::f64::consts::PI;
use std::fmt::Debug;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{wrap_unchecked, PeriodicGrid};

/// A velocity field `u(x, t)`, 1-periodic in `x`, with analytic spatial derivatives.
pub trait VelocityField: Send + Sync + Debug {
    fn u(&self, x: f64, t: f64) -> f64;
    fn u_x(&self, x: f64, t: f64) -> f64;
    /// Second spatial derivative, when known. Needed for H² reference data.
    fn u_xx(&self, _x: f64, _t: f64) -> Option<f64> {
        None
    }
    /// Upper bound for `|u_x|` over space-time, used by the step-size guard.
    fn sup_u_x(&self) -> Option<f64> {
        None
    }
    /// `Some(c)` if the field is the constant `c`.
    fn as_constant(&self) -> Option<f64> {
        None
    }
    /// `(u, u_x, u_xx)` at one point; `u_xx` is 0 when unknown.
    fn eval_all(&self, x: f64, t: f64) -> (f64, f64, f64) {
        (self.u(x, t), self.u_x(x, t), self.u_xx(x, t).unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantVelocity(pub f64);

impl VelocityField for ConstantVelocity {
    fn u(&self, _x: f64, _t: f64) -> f64 {
        self.0
    }
    fn u_x(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn u_xx(&self, _x: f64, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn sup_u_x(&self) -> Option<f64> {
        Some(0.0)
    }
    fn as_constant(&self) -> Option<f64> {
        Some(self.0)
    }
}

/// Travelling wave `u(x, t) = amplitude · sin(2π k x + ω t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineVelocity {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub omega: f64,
}

impl SineVelocity {
    /// `u(x, t) = sin(2πx + 8t) / 4`.
    pub fn benchmark() -> Self {
        Self { amplitude: 0.25, wavenumber: 1.0, omega: 8.0 }
    }

    #[inline]
    fn phase(&self, x: f64, t: f64) -> f64 {
        2.0 * PI * self.wavenumber * x + self.omega * t
    }
}

impl VelocityField for SineVelocity {
    fn u(&self, x: f64, t: f64) -> f64 {
        self.amplitude * self.phase(x, t).sin()
    }
    fn u_x(&self, x: f64, t: f64) -> f64 {
        2.0 * PI * self.wavenumber * self.amplitude * self.phase(x, t).cos()
    }
    fn u_xx(&self, x: f64, t: f64) -> Option<f64> {
        let k = 2.0 * PI * self.wavenumber;
        Some(-k * k * self.amplitude * self.phase(x, t).sin())
    }
    fn sup_u_x(&self) -> Option<f64> {
        Some((2.0 * PI * self.wavenumber * self.amplitude).abs())
    }
    fn eval_all(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let k = 2.0 * PI * self.wavenumber;
        let (s, c) = self.phase(x, t).sin_cos();
        let a = self.amplitude;
        (a * s, k * a * c, -k * k * a * s)
    }
}

/// Backtraced foot points `X_{0,j}` and their spatial derivatives `X_{1,j}` at grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CharMap {
    pub foot: Vec<f64>,
    pub foot_deriv: Vec<f64>,
}

/// Warns when `dt · sup|u_x| > 1/2`, outside the regime where the foot map
/// is known to stay a bijection with `ξ_x` near 1.
pub fn check_step_size(vel: &dyn VelocityField, dt: f64) -> bool {
    match vel.sup_u_x() {
        Some(s) if dt * s > 0.5 => {
            log::warn!("dt * sup|u_x| = {:.3} exceeds 1/2; foot map may degenerate", dt * s);
            false
        }
        _ => true,
    }
}

#[inline]
fn augmented(vel: &dyn VelocityField, y0: f64, y1: f64, t: f64) -> (f64, f64) {
    (vel.u(y0, t), y1 * vel.u_x(y0, t))
}

/// One backward RK3 step of the augmented system from `(x, 1)` at `t_next`.
/// Returns the unwrapped foot and its derivative.
#[inline]
pub fn rk3_foot(vel: &dyn VelocityField, x: f64, t_next: f64, dt: f64) -> (f64, f64) {
    let y = (x, 1.0);
    let k1 = augmented(vel, y.0, y.1, t_next);
    let k2 = augmented(vel, y.0 - 0.5 * dt * k1.0, y.1 - 0.5 * dt * k1.1, t_next - 0.5 * dt);
    let k3 = augmented(
        vel,
        y.0 - dt * (-k1.0 + 2.0 * k2.0),
        y.1 - dt * (-k1.1 + 2.0 * k2.1),
        t_next - dt,
    );
    (
        y.0 - dt * (k1.0 / 6.0 + 4.0 * k2.0 / 6.0 + k3.0 / 6.0),
        y.1 - dt * (k1.1 / 6.0 + 4.0 * k2.1 / 6.0 + k3.1 / 6.0),
    )
}

/// Foot points of the characteristics through every node at `t_next`, traced back by `dt`.
pub fn rk3_backtrace(vel: &dyn VelocityField, grid: &PeriodicGrid, t_next: f64, dt: f64) -> Result<CharMap> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    check_step_size(vel, dt);
    let (foot, foot_deriv) = grid
        .nodes()
        .iter()
        .map(|&x| {
            let (f, d) = rk3_foot(vel, x, t_next, dt);
            (wrap_unchecked(f), d)
        })
        .unzip();
    Ok(CharMap { foot, foot_deriv })
}

/// Result of a reference trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    /// Foot position, wrapped to `[0, 1)`.
    pub foot: f64,
    /// `ξ_x`.
    pub foot_deriv: f64,
    /// `ξ_xx`; `None` when the field provides no `u_xx`.
    pub foot_deriv2: Option<f64>,
}

const MAX_REFERENCE_STEPS: usize = 1 << 20;
const XIXX_TOL_FACTOR: f64 = 100.0;

/// High-accuracy trace of `(ξ, ξ_x)` from `s = t_from` to `s = t_to`.
pub fn reference_backtrace(vel: &dyn VelocityField, x: f64, t_from: f64, t_to: f64, tol: f64) -> Result<(f64, f64)> {
    let tr = reference_trace(vel, x, t_from, t_to, tol, false)?;
    Ok((tr.foot, tr.foot_deriv))
}

/// Like [`reference_backtrace`], optionally also integrating
/// `d/ds ξ_xx = u_xx(ξ, s) ξ_x² + u_x(ξ, s) ξ_xx`.
///
/// The step count doubles from 16. Successive fourth-order answers differ by
/// about 15 times the error of the finer one, so stepping stops once
/// `|fine − coarse| / 15 < tol` for `ξ` and `ξ_x` (and `< 100 tol` for `ξ_xx`
/// relative to `max(1, |ξ_xx|)`); the Richardson-extrapolated value is returned.
pub fn reference_trace(
    vel: &dyn VelocityField,
    x: f64,
    t_from: f64,
    t_to: f64,
    tol: f64,
    second_order: bool,
) -> Result<Trace> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if !x.is_finite() || !t_from.is_finite() || !t_to.is_finite() {
        return Err(Error::NonFinite(if x.is_finite() { t_from + t_to } else { x }));
    }
    let second = second_order && vel.u_xx(x, t_from).is_some();
    if t_from == t_to {
        return Ok(Trace { foot: wrap_unchecked(x), foot_deriv: 1.0, foot_deriv2: second.then_some(0.0) });
    }
    if let Some(c) = vel.as_constant() {
        return Ok(Trace {
            foot: wrap_unchecked(x - c * (t_from - t_to)),
            foot_deriv: 1.0,
            foot_deriv2: second.then_some(0.0),
        });
    }

    let mut steps = 16;
    let mut prev = rk4_integrate(vel, x, t_from, t_to, steps, second);
    loop {
        steps *= 2;
        let cur = rk4_integrate(vel, x, t_from, t_to, steps, second);
        let d2_scale = cur[2].abs().max(1.0);
        let diff = (cur[0] - prev[0])
            .abs()
            .max((cur[1] - prev[1]).abs())
            .max((cur[2] - prev[2]).abs() / d2_scale / XIXX_TOL_FACTOR);
        if diff / 15.0 < tol {
            let extrapolate = |c: usize| cur[c] + (cur[c] - prev[c]) / 15.0;
            return Ok(Trace {
                foot: wrap_unchecked(extrapolate(0)),
                foot_deriv: extrapolate(1),
                foot_deriv2: second.then(|| extrapolate(2)),
            });
        }
        if steps >= MAX_REFERENCE_STEPS {
            return Err(Error::NoConvergence { tol, steps });
        }
        prev = cur;
    }
}

/// Reference traces for many start points at once.
pub fn reference_trace_many(
    vel: &dyn VelocityField,
    xs: &[f64],
    t_from: f64,
    t_to: f64,
    tol: f64,
    second_order: bool,
) -> Result<Vec<Trace>> {
    xs.par_iter().map(|&x| reference_trace(vel, x, t_from, t_to, tol, second_order)).collect()
}

fn rk4_integrate(vel: &dyn VelocityField, x: f64, t_from: f64, t_to: f64, steps: usize, second: bool) -> [f64; 3] {
    let rhs = |y: [f64; 3], s: f64| -> [f64; 3] {
        let (u, ux, uxx) = vel.eval_all(y[0], s);
        let d2 = if second { uxx * y[1] * y[1] + ux * y[2] } else { 0.0 };
        [u, ux * y[1], d2]
    };
    let h = (t_to - t_from) / steps as f64;
    let mut y = [x, 1.0, 0.0];
    let add = |a: [f64; 3], b: [f64; 3], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]];
    for i in 0..steps {
        let s = t_from + i as f64 * h;
        let k1 = rhs(y, s);
        let k2 = rhs(add(y, k1, 0.5 * h), s + 0.5 * h);
        let k3 = rhs(add(y, k2, 0.5 * h), s + 0.5 * h);
        let k4 = rhs(add(y, k3, h), s + h);
        for c in 0..3 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_velocity_rk3_is_exact_shift() {
        let g = PeriodicGrid::uniform(16).unwrap();
        let c = 0.3;
        let dt = 0.05;
        let cm = rk3_backtrace(&ConstantVelocity(c), &g, 0.7, dt).unwrap();
        for (j, &x) in g.nodes().iter().enumerate() {
            assert!((cm.foot[j] - wrap_unchecked(x - c * dt)).abs() < 1e-15);
            assert_eq!(cm.foot_deriv[j], 1.0);
        }
    }

    #[test]
    fn rejects_nonpositive_dt() {
        let g = PeriodicGrid::uniform(8).unwrap();
        assert!(rk3_backtrace(&ConstantVelocity(1.0), &g, 0.0, 0.0).is_err());
        assert!(rk3_backtrace(&ConstantVelocity(1.0), &g, 0.0, -0.1).is_err());
    }

    #[test]
    fn reference_constant_velocity() {
        let (xi, xix) = reference_backtrace(&ConstantVelocity(0.7), 0.2, 1.0, 0.0, 1e-12).unwrap();
        assert!((xi - 0.5).abs() < 1e-15);
        assert_eq!(xix, 1.0);
    }

    #[test]
    fn reference_rejects_bad_tolerance() {
        assert!(reference_backtrace(&SineVelocity::benchmark(), 0.2, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn reference_round_trip() {
        let v = SineVelocity::benchmark();
        let tol = 1e-12;
        for &x in &[0.0, 0.13, 0.5, 0.77, 0.999] {
            let (foot, _) = reference_backtrace(&v, x, 1.0, 0.0, tol).unwrap();
            let (back, _) = reference_backtrace(&v, foot, 0.0, 1.0, tol).unwrap();
            let d = (back - x).abs();
            let d = d.min(1.0 - d);
            assert!(d < 2.0 * tol, "x={x} d={d}");
        }
    }

    #[test]
    fn reference_foot_deriv_positive() {
        let v = SineVelocity::benchmark();
        for i in 0..40 {
            let x = i as f64 / 40.0;
            for &t in &[0.1, 0.5, 1.0, 3.0] {
                let (_, xix) = reference_backtrace(&v, x, t, 0.0, 1e-11).unwrap();
                assert!(xix > 0.0);
            }
        }
    }

    #[test]
    fn second_variation_matches_finite_difference() {
        let v = SineVelocity::benchmark();
        let x = 0.31;
        let e = 1e-4;
        let tr = reference_trace(&v, x, 1.0, 0.0, 1e-13, true).unwrap();
        let p = reference_trace(&v, x + e, 1.0, 0.0, 1e-13, false).unwrap();
        let m = reference_trace(&v, x - e, 1.0, 0.0, 1e-13, false).unwrap();
        let fd = (p.foot_deriv - m.foot_deriv) / (2.0 * e);
        assert!((tr.foot_deriv2.unwrap() - fd).abs() < 1e-6);
        let fd1 = {
            let mut d = p.foot - m.foot;
            if d > 0.5 {
                d -= 1.0
            } else if d < -0.5 {
                d += 1.0
            }
            d / (2.0 * e)
        };
        assert!((tr.foot_deriv - fd1).abs() < 1e-7);
    }

    #[test]
    fn velocity_derivatives_match_central_differences() {
        let v = SineVelocity::benchmark();
        let e = 1e-5;
        for i in 0..25 {
            let x = (i as f64 * 0.6180339).fract();
            let t = i as f64 * 0.04;
            let fd = (v.u(x + e, t) - v.u(x - e, t)) / (2.0 * e);
            let an = v.u_x(x, t);
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0));
            let fd2 = (v.u_x(x + e, t) - v.u_x(x - e, t)) / (2.0 * e);
            let an2 = v.u_xx(x, t).unwrap();
            assert!((fd2 - an2).abs() <= 1e-6 * an2.abs().max(1.0));
        }
    }

    #[test]
    fn step_guard() {
        assert!(check_step_size(&SineVelocity::benchmark(), 1.0 / 80.0));
        assert!(!check_step_size(&SineVelocity::benchmark(), 0.5));
    }
}
