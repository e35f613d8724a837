//! Error measurement: composite-Simpson relative norms on a fine periodic
//! sampling, the weighted H² combination and convergence rates.
//!
//! Errors are sampled at the `2M̃` points `x_i = i / (2M̃)`. Odd points carry
//! Simpson weight 4 and even points weight 2; the point `x_{2M̃}` folds onto
//! `x_0` by periodicity.

use crate::characteristics::reference_trace_many;
use crate::error::{Error, Result};
use crate::interpolation::Interpolant;
use crate::schemes::Problem;

/// Default sample count parameter: `2 · 6000` error samples.
pub const DEFAULT_MTILDE: usize = 6000;
/// Tracer tolerance for reference solutions.
pub const REFERENCE_TOL: f64 = 1e-12;

/// The `2M̃` equispaced sample positions.
pub fn sample_points(mtilde: usize) -> Vec<f64> {
    let n = 2 * mtilde;
    (0..n).map(|i| i as f64 / n as f64).collect()
}

/// `[ (1/(6M̃)) Σ_{j=1..M̃} (4 s_{2j-1} + 2 s_{2j}) ]^{1/2}` over `2M̃` periodic samples.
pub fn simpson_functional(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddSampleCount(n));
    }
    let mtilde = n / 2;
    let mut sum = 0.0;
    for j in 1..=mtilde {
        sum += 4.0 * samples[2 * j - 1] + 2.0 * samples[(2 * j) % n];
    }
    Ok((sum / (6.0 * mtilde as f64)).sqrt())
}

/// Values and first two derivatives at the sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Samples {
    pub fn from_interpolant(f: &dyn Interpolant, xs: &[f64]) -> Self {
        Self {
            value: xs.iter().map(|&x| f.eval(x)).collect(),
            d1: xs.iter().map(|&x| f.eval_deriv(x)).collect(),
            d2: xs.iter().map(|&x| f.eval_deriv2(x)).collect(),
        }
    }

    pub fn from_fns(xs: &[f64], value: impl Fn(f64) -> f64, d1: impl Fn(f64) -> f64, d2: impl Fn(f64) -> f64) -> Self {
        Self {
            value: xs.iter().map(|&x| value(x)).collect(),
            d1: xs.iter().map(|&x| d1(x)).collect(),
            d2: xs.iter().map(|&x| d2(x)).collect(),
        }
    }

    fn order(&self, order: u8) -> &[f64] {
        match order {
            0 => &self.value,
            1 => &self.d1,
            _ => &self.d2,
        }
    }

    /// Every sample multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| c * x).collect();
        Self { value: s(&self.value), d1: s(&self.d1), d2: s(&self.d2) }
    }
}

/// Exact solution at the horizon, sampled on the fine grid.
///
/// `φ(x, T) = φ₀(ξ)`, `φ_x = φ₀'(ξ) ξ_x` and
/// `φ_xx = φ₀''(ξ) ξ_x² + φ₀'(ξ) ξ_xx` with `ξ = ξ(0; x, T)` from the
/// reference tracer.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub mtilde: usize,
    pub horizon: f64,
    pub samples: Samples,
}

impl ReferenceSolution {
    pub fn compute(problem: &Problem, mtilde: usize) -> Result<Self> {
        Self::compute_at(problem, mtilde, problem.horizon)
    }

    /// Exact solution at time `t` instead of the horizon.
    pub fn compute_at(problem: &Problem, mtilde: usize, t: f64) -> Result<Self> {
        if mtilde < 4 {
            return Err(Error::InvalidArgument(format!("M̃ = {mtilde} must be at least 4")));
        }
        let xs = sample_points(mtilde);
        let traces = reference_trace_many(problem.velocity.as_ref(), &xs, t, 0.0, REFERENCE_TOL, true)?;
        let init = problem.initial.as_ref();
        let mut samples = Samples {
            value: Vec::with_capacity(xs.len()),
            d1: Vec::with_capacity(xs.len()),
            d2: Vec::with_capacity(xs.len()),
        };
        for tr in &traces {
            let d = init.deriv(tr.foot);
            let xix = tr.foot_deriv;
            samples.value.push(init.value(tr.foot));
            samples.d1.push(d * xix);
            let xixx = tr
                .foot_deriv2
                .ok_or_else(|| Error::InvalidArgument("velocity field provides no u_xx".into()))?;
            samples.d2.push(init.deriv2(tr.foot) * xix * xix + d * xixx);
        }
        Ok(Self { mtilde, horizon: t, samples })
    }

    pub fn points(&self) -> Vec<f64> {
        sample_points(self.mtilde)
    }
}

/// Numerical and reference samples on the same fine grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPair {
    pub numerical: Samples,
    pub reference: Samples,
}

impl SampledPair {
    pub fn new(numerical: Samples, reference: Samples) -> Result<Self> {
        let n = reference.value.len();
        if n < 8 || n % 2 != 0 {
            return Err(Error::OddSampleCount(n));
        }
        for v in [&numerical.value, &numerical.d1, &numerical.d2, &reference.d1, &reference.d2] {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: v.len() });
            }
        }
        if let Some(&x) = reference.value.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        Ok(Self { numerical, reference })
    }

    /// Samples `num` against a precomputed reference.
    pub fn against(num: &dyn Interpolant, reference: &ReferenceSolution) -> Result<Self> {
        let xs = reference.points();
        Self::new(Samples::from_interpolant(num, &xs), reference.samples.clone())
    }

    /// Relative error of the `order`-th derivative (0 = values).
    pub fn relative_error(&self, order: u8) -> Result<f64> {
        relative_from_samples(self.numerical.order(order), self.reference.order(order))
    }
}

fn relative_from_samples(num: &[f64], reference: &[f64]) -> Result<f64> {
    let diff: Vec<f64> = num.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).collect();
    let refsq: Vec<f64> = reference.iter().map(|b| b * b).collect();
    let den = simpson_functional(&refsq)?;
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(simpson_functional(&diff)? / den)
}

/// Relative L² error `ε` of `num` against `reference`, both sampled at `2M̃` points.
pub fn relative_l2_error(num: impl Fn(f64) -> f64, reference: impl Fn(f64) -> f64, mtilde: usize) -> Result<f64> {
    let xs = sample_points(mtilde);
    let a: Vec<f64> = xs.iter().map(|&x| num(x)).collect();
    let b: Vec<f64> = xs.iter().map(|&x| reference(x)).collect();
    relative_from_samples(&a, &b)
}

/// `‖D^m(num − ref)‖ / ‖D^m ref‖` for `m = order ∈ {1, 2}`, Simpson-sampled.
pub fn seminorm_error(pair: &SampledPair, order: u8) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("seminorm order {order} must be 1 or 2")));
    }
    pair.relative_error(order)
}

/// Weighted H² error `(ε_L2² + (h⁴/Δt) ε_H2²)^{1/2}` built from the
/// relative L² and relative H²-seminorm errors.
pub fn weighted_h2_error(pair: &SampledPair, h: f64, dt: f64) -> Result<f64> {
    if !(h > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("h = {h} and dt = {dt} must be positive")));
    }
    let l2 = pair.relative_error(0)?;
    let h2 = pair.relative_error(2)?;
    Ok(weighted_combination(l2, h2, h, dt))
}

/// `(l2² + (h⁴/dt) h2²)^{1/2}`.
pub fn weighted_combination(l2: f64, h2: f64, h: f64, dt: f64) -> f64 {
    (l2 * l2 + h.powi(4) / dt * h2 * h2).sqrt()
}

/// `ρ = (ln ε₁ − ln ε₂) / (ln h₁ − ln h₂)`.
pub fn convergence_rate(eps1: f64, eps2: f64, h1: f64, h2: f64) -> Result<f64> {
    if !(eps1 > 0.0 && eps2 > 0.0 && h1 > 0.0 && h2 > 0.0) {
        return Err(Error::InvalidArgument("convergence rate needs positive errors and sizes".into()));
    }
    if h1 == h2 {
        return Err(Error::InvalidArgument("convergence rate needs distinct sizes".into()));
    }
    Ok((eps1.ln() - eps2.ln()) / (h1.ln() - h2.ln()))
}

/// Errors of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub m: usize,
    pub n: usize,
    pub h: f64,
    pub dt: f64,
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub wh2: f64,
}

impl ErrorRow {
    pub fn from_pair(m: usize, n: usize, h: f64, dt: f64, pair: &SampledPair) -> Result<Self> {
        let l2 = pair.relative_error(0)?;
        let h1 = seminorm_error(pair, 1)?;
        let h2 = seminorm_error(pair, 2)?;
        Ok(Self { m, n, h, dt, l2, h1, h2, wh2: weighted_combination(l2, h2, h, dt) })
    }
}

/// Rates between two consecutive rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub wh2: f64,
}

impl RateRow {
    /// Rates between `a` and `b`, measured against `h` when the widths differ
    /// and against `dt` otherwise.
    pub fn between(a: &ErrorRow, b: &ErrorRow) -> Result<Self> {
        let (s1, s2) = if a.h != b.h { (a.h, b.h) } else { (a.dt, b.dt) };
        Ok(Self {
            l2: convergence_rate(a.l2, b.l2, s1, s2)?,
            h1: convergence_rate(a.h1, b.h1, s1, s2)?,
            h2: convergence_rate(a.h2, b.h2, s1, s2)?,
            wh2: convergence_rate(a.wh2, b.wh2, s1, s2)?,
        })
    }
}

/// Rows of a convergence study and the rates between consecutive rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
    pub rates: Vec<RateRow>,
}

impl ErrorReport {
    pub fn from_rows(rows: Vec<ErrorRow>) -> Result<Self> {
        let rates = rows.windows(2).map(|w| RateRow::between(&w[0], &w[1])).collect::<Result<_>>()?;
        Ok(Self { rows, rates })
    }
}
