//! One-step methods for `φ_t + u φ_x = 0` on the unit circle and the
//! fixed-step driver [`run`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::characteristics::{rk3_backtrace, SineVelocity, VelocityField};
use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::interpolation::{hermite_interpolate, lagrange_interpolate, spline_interpolate, Interpolant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// Values and derivatives closed by cubic Hermite interpolation.
    Cip,
    /// Semi-Lagrangian with periodic cubic spline interpolation.
    Spline,
    /// Semi-Lagrangian with symmetric 4-point Lagrange interpolation.
    Lagrange,
    /// First-order upwind, constant velocity only.
    Upwind,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [SchemeKind::Cip, SchemeKind::Spline, SchemeKind::Lagrange, SchemeKind::Upwind];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Cip => "cip",
            SchemeKind::Spline => "spline",
            SchemeKind::Lagrange => "lagrange",
            SchemeKind::Upwind => "upwind",
        }
    }

    /// Whether the state carries node derivatives.
    pub fn carries_derivs(self) -> bool {
        matches!(self, SchemeKind::Cip)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cip" => Ok(SchemeKind::Cip),
            "spline" => Ok(SchemeKind::Spline),
            "lagrange" => Ok(SchemeKind::Lagrange),
            "upwind" => Ok(SchemeKind::Upwind),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

/// A 1-periodic initial profile with analytic derivatives.
pub trait InitialProfile: Send + Sync + fmt::Debug {
    fn value(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
    fn deriv2(&self, x: f64) -> f64;
}

/// `φ₀(x) = exp(sin(2π k x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSine {
    pub wavenumber: f64,
}

impl InitialProfile for ExpSine {
    fn value(&self, x: f64) -> f64 {
        (2.0 * PI * self.wavenumber * x).sin().exp()
    }

    fn deriv(&self, x: f64) -> f64 {
        let k = 2.0 * PI * self.wavenumber;
        let a = k * x;
        k * a.cos() * a.sin().exp()
    }

    fn deriv2(&self, x: f64) -> f64 {
        let k = 2.0 * PI * self.wavenumber;
        let a = k * x;
        let (s, c) = a.sin_cos();
        k * k * s.exp() * (c * c - s)
    }
}

/// `φ₀(x) = amplitude · cos(2π k x + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cosine {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub phase: f64,
}

impl InitialProfile for Cosine {
    fn value(&self, x: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.wavenumber * x + self.phase).cos()
    }
    fn deriv(&self, x: f64) -> f64 {
        let k = 2.0 * PI * self.wavenumber;
        -self.amplitude * k * (k * x + self.phase).sin()
    }
    fn deriv2(&self, x: f64) -> f64 {
        let k = 2.0 * PI * self.wavenumber;
        -self.amplitude * k * k * (k * x + self.phase).cos()
    }
}

/// Initial value problem: velocity, initial profile and horizon `T`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub velocity: Arc<dyn VelocityField>,
    pub initial: Arc<dyn InitialProfile>,
    pub horizon: f64,
}

impl Problem {
    /// `u = sin(2πx + 8t)/4`, `φ₀ = exp(sin 4πx)`, `T = 1`.
    pub fn benchmark() -> Self {
        Self {
            velocity: Arc::new(SineVelocity::benchmark()),
            initial: Arc::new(ExpSine { wavenumber: 2.0 }),
            horizon: 1.0,
        }
    }
}

/// Grid data of a scheme at time `t`. `derivs` is present for CIP only.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeState {
    pub grid: Arc<PeriodicGrid>,
    pub time: f64,
    pub values: Vec<f64>,
    pub derivs: Option<Vec<f64>>,
}

impl SchemeState {
    pub fn new(grid: Arc<PeriodicGrid>, time: f64, values: Vec<f64>, derivs: Option<Vec<f64>>) -> Result<Self> {
        let m = grid.len();
        if values.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: values.len() });
        }
        if let Some(d) = &derivs {
            if d.len() != m {
                return Err(Error::LengthMismatch { expected: m, got: d.len() });
            }
        }
        Ok(Self { grid, time, values, derivs })
    }

    /// The piecewise-cubic function this state represents under `kind`:
    /// the Hermite interpolant for CIP, the spline for the spline scheme and
    /// the symmetric Lagrange interpolant otherwise.
    pub fn reconstruct(&self, kind: SchemeKind) -> Result<Box<dyn Interpolant + '_>> {
        Ok(match kind {
            SchemeKind::Cip => {
                let d = self.derivs.as_deref().ok_or_else(|| missing_derivs(kind))?;
                Box::new(hermite_interpolate(&self.grid, &self.values, d)?)
            }
            SchemeKind::Spline => Box::new(spline_interpolate(&self.grid, &self.values)?),
            SchemeKind::Lagrange | SchemeKind::Upwind => Box::new(lagrange_interpolate(&self.grid, &self.values)?),
        })
    }
}

fn missing_derivs(kind: SchemeKind) -> Error {
    Error::Scheme { scheme: kind.name(), reason: "state has no node derivatives".into() }
}

/// CIP initial data: node values and analytic node derivatives at `t = 0`.
pub fn cip_init(problem: &Problem, grid: Arc<PeriodicGrid>) -> SchemeState {
    let values = grid.nodes().iter().map(|&x| problem.initial.value(x)).collect();
    let derivs = grid.nodes().iter().map(|&x| problem.initial.deriv(x)).collect();
    SchemeState { grid, time: 0.0, values, derivs: Some(derivs) }
}

/// Initial data for any scheme.
pub fn init(kind: SchemeKind, problem: &Problem, grid: Arc<PeriodicGrid>) -> SchemeState {
    if kind.carries_derivs() {
        return cip_init(problem, grid);
    }
    let values = grid.nodes().iter().map(|&x| problem.initial.value(x)).collect();
    SchemeState { grid, time: 0.0, values, derivs: None }
}

/// One CIP step: `F ← φ_h(X₀)`, `G ← X₁ · Dφ_h(X₀)`.
pub fn cip_step(state: &SchemeState, vel: &dyn VelocityField, dt: f64) -> Result<SchemeState> {
    let derivs = state.derivs.as_deref().ok_or_else(|| missing_derivs(SchemeKind::Cip))?;
    let t_next = state.time + dt;
    let phi = hermite_interpolate(&state.grid, &state.values, derivs)?;
    let chars = rk3_backtrace(vel, &state.grid, t_next, dt)?;
    let (values, new_derivs) = chars
        .foot
        .iter()
        .zip(&chars.foot_deriv)
        .map(|(&foot, &jac)| {
            let (v, d) = phi.eval_with_deriv(foot);
            (v, jac * d)
        })
        .unzip();
    Ok(SchemeState { grid: state.grid.clone(), time: t_next, values, derivs: Some(new_derivs) })
}

fn sample_at_feet(state: &SchemeState, vel: &dyn VelocityField, dt: f64, phi: &dyn Interpolant) -> Result<SchemeState> {
    let t_next = state.time + dt;
    let chars = rk3_backtrace(vel, &state.grid, t_next, dt)?;
    let values = chars.foot.iter().map(|&x| phi.eval(x)).collect();
    Ok(SchemeState { grid: state.grid.clone(), time: t_next, values, derivs: None })
}

/// One spline semi-Lagrangian step: `F ← P_h F (X₀)`.
pub fn spline_sl_step(state: &SchemeState, vel: &dyn VelocityField, dt: f64) -> Result<SchemeState> {
    let phi = spline_interpolate(&state.grid, &state.values)?;
    sample_at_feet(state, vel, dt, &phi)
}

/// One symmetric-Lagrange semi-Lagrangian step. Uniform grids only.
pub fn lagrange_sl_step(state: &SchemeState, vel: &dyn VelocityField, dt: f64) -> Result<SchemeState> {
    let phi = lagrange_interpolate(&state.grid, &state.values)?;
    sample_at_feet(state, vel, dt, &phi)
}

/// One first-order upwind step for constant velocity `u_const`.
pub fn upwind_step(state: &SchemeState, u_const: f64, dt: f64) -> Result<SchemeState> {
    let grid = &state.grid;
    if !grid.is_uniform() {
        return Err(Error::NonUniformGrid);
    }
    let h = grid.h_max();
    let mu = u_const * dt / h;
    if !(mu.abs() <= 1.0) {
        return Err(Error::Cfl(mu));
    }
    let m = grid.len();
    let f = &state.values;
    let values = if mu >= 0.0 {
        (0..m).map(|j| (1.0 - mu) * f[j] + mu * f[(j + m - 1) % m]).collect()
    } else {
        let a = -mu;
        (0..m).map(|j| (1.0 - a) * f[j] + a * f[(j + 1) % m]).collect()
    };
    Ok(SchemeState { grid: state.grid.clone(), time: state.time + dt, values, derivs: None })
}

/// Advances `state` by one step of `kind`.
pub fn step(kind: SchemeKind, state: &SchemeState, vel: &dyn VelocityField, dt: f64) -> Result<SchemeState> {
    match kind {
        SchemeKind::Cip => cip_step(state, vel, dt),
        SchemeKind::Spline => spline_sl_step(state, vel, dt),
        SchemeKind::Lagrange => lagrange_sl_step(state, vel, dt),
        SchemeKind::Upwind => {
            let c = vel.as_constant().ok_or_else(|| Error::Scheme {
                scheme: "upwind",
                reason: "requires a constant velocity field".into(),
            })?;
            upwind_step(state, c, dt)
        }
    }
}

/// Runs `steps` uniform steps of size `T / steps` from the initial data.
pub fn run(kind: SchemeKind, problem: &Problem, grid: Arc<PeriodicGrid>, steps: usize) -> Result<SchemeState> {
    if steps == 0 {
        return Err(Error::InvalidArgument("step count must be >= 1".into()));
    }
    let horizon = problem.horizon;
    let dt = horizon / steps as f64;
    let mut state = init(kind, problem, grid);
    for n in 0..steps {
        state = step(kind, &state, problem.velocity.as_ref(), dt)?;
        // pin the clock to t^n = nT/N so rounding does not accumulate
        state.time = horizon * (n + 1) as f64 / steps as f64;
    }
    Ok(state)
}
