//! `sweep`: Cartesian parameter grids over cusp families, one CSV row per cell.

use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use robinlab::bounds::{local_positivity_trend, TrendOptions};
use robinlab::criteria::{bbc_criterion, cusp_criterion};
use robinlab::profile::slice_profile;
use robinlab::ProfileFunction;

use crate::config::{SweepFamily, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub gamma: f64,
    pub p: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub alpha: f64,
    pub gamma: f64,
    pub p: f64,
    pub beta: f64,
    pub cusp_verdict: String,
    pub cusp_value: Option<f64>,
    pub bbc_verdict: String,
    pub bbc_value: Option<f64>,
    pub slice_exponent: Option<f64>,
    pub certificate: String,
    pub trend: String,
    pub error: String,
}

/// Cells in row-major order: alpha, then gamma, then p, then beta.
pub fn cells(spec: &SweepSpec) -> Vec<Cell> {
    let gammas: &[f64] = match spec.family {
        SweepFamily::Power => &[0.0],
        SweepFamily::PowerLog => &spec.gamma,
    };
    let mut out = Vec::new();
    for &alpha in &spec.alpha {
        for &gamma in gammas {
            for &p in &spec.p {
                for &beta in &spec.beta {
                    out.push(Cell { alpha, gamma, p, beta });
                }
            }
        }
    }
    out
}

fn profile_of(spec: &SweepSpec, c: &Cell) -> ProfileFunction {
    match spec.family {
        SweepFamily::Power => ProfileFunction::power(c.alpha),
        SweepFamily::PowerLog => ProfileFunction::power_log(c.alpha, c.gamma),
    }
}

/// Evaluates one cell; failures land in the `error` column.
pub fn evaluate(spec: &SweepSpec, c: &Cell) -> Row {
    let h = profile_of(spec, c);
    let mut row = Row {
        alpha: c.alpha,
        gamma: c.gamma,
        p: c.p,
        beta: c.beta,
        cusp_verdict: String::new(),
        cusp_value: None,
        bbc_verdict: String::new(),
        bbc_value: None,
        slice_exponent: None,
        certificate: String::new(),
        trend: String::new(),
        error: String::new(),
    };
    let mut errors = Vec::new();
    match cusp_criterion(&h, spec.n_dim, c.p) {
        Ok(v) => {
            row.cusp_verdict = v.verdict.as_str().into();
            row.cusp_value = v.value;
        }
        Err(e) => errors.push(format!("cusp: {e}")),
    }
    match bbc_criterion(&h, spec.n_dim) {
        Ok(v) => {
            row.bbc_verdict = v.verdict.as_str().into();
            row.bbc_value = v.value;
        }
        Err(e) => errors.push(format!("bbc: {e}")),
    }
    match slice_profile(&h, spec.n_dim, c.p, None) {
        Ok(curve) => {
            row.slice_exponent = Some(curve.fit.exponent);
            row.certificate = curve.certificate().as_str().into();
        }
        Err(e) => errors.push(format!("profile: {e}")),
    }
    if let Some(deltas) = &spec.trend_deltas {
        match local_positivity_trend(&h, c.p, c.beta, deltas, &TrendOptions::default()) {
            Ok(r) => row.trend = serde_json::to_value(r.class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            Err(e) => errors.push(format!("trend: {e}")),
        }
    }
    row.error = errors.join("; ");
    row
}

/// Runs all cells in parallel and writes `sweep.csv` in cell order.
pub fn sweep(spec: &SweepSpec, out: &Path) -> Result<Vec<Row>> {
    std::fs::create_dir_all(out)?;
    let rows: Vec<Row> = cells(spec).par_iter().map(|c| evaluate(spec, c)).collect();
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(out.join("sweep.csv"))?;
    w.write_record([
        "alpha",
        "gamma",
        "p",
        "beta",
        "cusp_verdict",
        "cusp_value",
        "bbc_verdict",
        "bbc_value",
        "slice_exponent",
        "certificate",
        "trend",
        "error",
    ])?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(rows)
}
