//! Phase-shift sweeps and their CSV rendering.

use std::fmt::Write as _;

use rayon::prelude::*;
use semilag::spectral::{phase_table, PhaseRow};

use crate::config::ExperimentConfig;
use crate::error::Result;

pub const CSV_HEADER: &str = "scheme,k,kh,theta,theta_unwrapped,theta_exact,amplification";

/// Phase rows of every configured scheme, ordered by scheme then `k`.
pub fn run_phase(config: &ExperimentConfig) -> Result<Vec<PhaseRow>> {
    config.validate()?;
    let per_scheme: Vec<_> = config
        .schemes
        .par_iter()
        .map(|&kind| phase_table(&[kind], config.m, config.mu))
        .collect::<std::result::Result<_, _>>()?;
    Ok(per_scheme.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[PhaseRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.6},{:.10e},{:.10e},{:.10e},{:.10e}",
            r.scheme, r.k, r.kh, r.theta, r.theta_unwrapped, r.theta_exact, r.amplification
        );
    }
    s
}
