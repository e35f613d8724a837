//! Gauss–Legendre rules used for per-cell integrals.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// An `n`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct Rule(GaussLegendre);

/// The `n`-point Gauss–Legendre rule.
///
/// # Panics
/// If `n == 0`.
pub fn gauss_legendre(n: usize) -> Rule {
    let n = NonZeroUsize::new(n).expect("a quadrature rule needs at least one point");
    Rule(GaussLegendre::new(n))
}

/// Integrates `f` over `[a, b]` with `rule`.
pub fn integrate(rule: &Rule, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    rule.0.integrate(a, b, f)
}
