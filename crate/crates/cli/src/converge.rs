//! Convergence studies on the built-in benchmark problem.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use semilag::norms::{ErrorRow, RateRow, ReferenceSolution, SampledPair};
use semilag::schemes::run;
use semilag::{PeriodicGrid, Problem, SchemeKind};

use crate::config::{ExperimentConfig, Regime};
use crate::error::{CliError, Result};

/// Largest `M · N` a single row may cost.
pub const WORK_LIMIT: u128 = 20_000_000_000;
/// Largest grid a single row may allocate.
pub const MAX_NODES: usize = 1 << 24;

pub const CSV_HEADER: &str = "scheme,regime,M,N,h,dt,l2,l2_rate,h1,h1_rate,h2,h2_rate,wh2,wh2_rate";

/// Grid size, step count and the resulting `h`, `Δt` of one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub m: usize,
    pub n: usize,
    pub h: f64,
    pub dt: f64,
}

impl Resolution {
    pub fn new(m: usize, n: usize, horizon: f64) -> Self {
        Self { m, n, h: 1.0 / m as f64, dt: horizon / n as f64 }
    }
}

/// Maps a level to `(M, N)`. Fixed values are rounded to the nearest
/// `1/M` or `T/N`.
pub fn resolution(regime: Regime, level: usize, fixed: Option<f64>, horizon: f64) -> Result<Resolution> {
    let count = |v: f64, span: f64| -> Result<usize> {
        let c = (span / v).round();
        if !(c >= 1.0) || c > usize::MAX as f64 {
            return Err(CliError::Config(format!("fixed value {v} gives no valid division of {span}")));
        }
        let c = c as usize;
        if ((span / c as f64) - v).abs() > 1e-9 * v {
            log::warn!("fixed value {v} rounded to {}", span / c as f64);
        }
        Ok(c)
    };
    let need = || fixed.ok_or_else(|| CliError::Config(format!("regime {regime} needs a fixed value")));
    let (m, n) = match regime {
        Regime::Coupled => (level, (horizon * level as f64).round().max(1.0) as usize),
        Regime::FixedDt => (level, count(need()?, horizon)?),
        Regime::FixedH => (count(need()?, 1.0)?, level),
    };
    Ok(Resolution::new(m, n, horizon))
}

/// One requested row: its resolution and either the errors or why it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct RowOutcome {
    pub scheme: SchemeKind,
    pub level: usize,
    pub resolution: Option<Resolution>,
    pub result: std::result::Result<ErrorRow, String>,
}

/// All rows of a study, grouped by scheme in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub regime: Regime,
    pub rows: Vec<RowOutcome>,
}

impl ConvergenceReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }

    /// Successful rows of `scheme`, in level order.
    pub fn errors(&self, scheme: SchemeKind) -> Vec<ErrorRow> {
        self.rows.iter().filter(|r| r.scheme == scheme).filter_map(|r| r.result.clone().ok()).collect()
    }

    /// Rate of each row against the previous row of the same scheme, when both succeeded.
    pub fn rates(&self) -> Vec<Option<RateRow>> {
        let mut out = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let prev = (i > 0 && self.rows[i - 1].scheme == row.scheme).then(|| &self.rows[i - 1]);
            let rate = match (prev.map(|p| &p.result), &row.result) {
                (Some(Ok(a)), Ok(b)) => RateRow::between(a, b).ok(),
                _ => None,
            };
            out.push(rate);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        let rate = |r: Option<f64>| r.map(|v| format!("{v:.3}")).unwrap_or_default();
        for (row, rates) in self.rows.iter().zip(self.rates()) {
            match &row.result {
                Ok(e) => {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{:.6e},{:.6e},{:.4e},{},{:.4e},{},{:.4e},{},{:.4e},{}",
                        row.scheme,
                        self.regime,
                        e.m,
                        e.n,
                        e.h,
                        e.dt,
                        e.l2,
                        rate(rates.map(|r| r.l2)),
                        e.h1,
                        rate(rates.map(|r| r.h1)),
                        e.h2,
                        rate(rates.map(|r| r.h2)),
                        e.wh2,
                        rate(rates.map(|r| r.wh2)),
                    );
                }
                Err(msg) => {
                    let where_ = match row.resolution {
                        Some(r) => format!("M={} N={}", r.m, r.n),
                        None => format!("level={}", row.level),
                    };
                    let _ = writeln!(s, "# {} {} {where_}: {}", row.scheme, self.regime, msg.replace('\n', " "));
                }
            }
        }
        s
    }
}

fn guard(res: &Resolution) -> std::result::Result<(), String> {
    if res.m > MAX_NODES {
        return Err(format!("M = {} exceeds the grid limit {MAX_NODES}", res.m));
    }
    if res.m as u128 * res.n as u128 > WORK_LIMIT {
        return Err(format!("M*N = {} exceeds the work limit {WORK_LIMIT}", res.m as u128 * res.n as u128));
    }
    Ok(())
}

/// Runs one row against a precomputed reference.
pub fn run_row(
    kind: SchemeKind,
    problem: &Problem,
    res: Resolution,
    reference: &ReferenceSolution,
) -> std::result::Result<ErrorRow, String> {
    guard(&res)?;
    let start = Instant::now();
    let grid = Arc::new(PeriodicGrid::uniform(res.m).map_err(|e| e.to_string())?);
    let state = run(kind, problem, grid, res.n).map_err(|e| e.to_string())?;
    let f = state.reconstruct(kind).map_err(|e| e.to_string())?;
    let pair = SampledPair::against(f.as_ref(), reference).map_err(|e| e.to_string())?;
    let row = ErrorRow::from_pair(res.m, res.n, res.h, res.dt, &pair).map_err(|e| e.to_string())?;
    log::info!("{kind} M={} N={}: l2 {:.4e} in {:.2?}", res.m, res.n, row.l2, start.elapsed());
    Ok(row)
}

/// Runs every (scheme, level) row of `config` on `problem`, reusing `reference`.
pub fn run_convergence_with(config: &ExperimentConfig, problem: &Problem, reference: &ReferenceSolution) -> ConvergenceReport {
    let jobs: Vec<(SchemeKind, usize)> =
        config.schemes.iter().flat_map(|&s| config.levels.iter().map(move |&l| (s, l))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(scheme, level)| match resolution(config.regime, level, config.fixed, problem.horizon) {
            Ok(res) => RowOutcome { scheme, level, resolution: Some(res), result: run_row(scheme, problem, res, reference) },
            Err(e) => RowOutcome { scheme, level, resolution: None, result: Err(e.to_string()) },
        })
        .collect();
    ConvergenceReport { regime: config.regime, rows }
}

/// Convergence study on the benchmark problem. The reference solution is
/// computed once and shared by all rows.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let problem = Problem::benchmark();
    let start = Instant::now();
    let reference = ReferenceSolution::compute(&problem, config.mtilde)?;
    log::info!("reference solution with M~={} in {:.2?}", config.mtilde, start.elapsed());
    Ok(run_convergence_with(config, &problem, &reference))
}

/// Human-readable table: errors with the rate to the previous row.
pub fn render_table(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    let rates = report.rates();
    let mut current = None;
    for (row, rate) in report.rows.iter().zip(rates) {
        if current != Some(row.scheme) {
            current = Some(row.scheme);
            let _ = writeln!(s, "{} ({})", row.scheme, report.regime);
            let _ = writeln!(
                s,
                "{:>6} {:>6} {:>10} {:>6} {:>10} {:>6} {:>10} {:>6} {:>10} {:>6}",
                "M", "N", "L2", "rate", "H1", "rate", "H2", "rate", "wH2", "rate"
            );
        }
        let r = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
        match &row.result {
            Ok(e) => {
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>10.3e} {:>6} {:>10.3e} {:>6} {:>10.3e} {:>6} {:>10.3e} {:>6}",
                    e.m,
                    e.n,
                    e.l2,
                    r(rate.map(|x| x.l2)),
                    e.h1,
                    r(rate.map(|x| x.h1)),
                    e.h2,
                    r(rate.map(|x| x.h2)),
                    e.wh2,
                    r(rate.map(|x| x.wh2)),
                );
            }
            Err(msg) => {
                let _ = writeln!(s, "  level {} failed: {msg}", row.level);
            }
        }
    }
    s
}
