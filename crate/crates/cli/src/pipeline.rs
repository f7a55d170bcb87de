//! `run`: geometry, mesh, solve, level sets, profile, bounds, criteria.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::info;
use serde_json::json;

use robinlab::bounds::{compute_t, local_positivity_trend, PositivityStatus, TrendReport};
use robinlab::criteria::{
    bbc_criterion, bbc_criterion_analytic, bbc_criterion_numeric, cusp_criterion, cusp_criterion_analytic,
    cusp_criterion_numeric, density_estimate, exponent_m, verdicts_csv, CriterionVerdict, Method, Verdict,
};
use robinlab::geometry::build_cusp_polygon;
use robinlab::levelsets::{coarea_check, interior_grid, level_table, level_table_csv};
use robinlab::meshing::triangulate_with;
use robinlab::profile::{candidate_profile, local_profile_comparison, slice_profile, ProfileCurve};
use robinlab::solver::minimize;
use robinlab::{Edge, PolygonDomain, RunParams};

use crate::config::{CriterionSpec, DomainSpec, ExperimentConfig};

/// What a run produced; `sound` is false when any soundness check failed.
pub struct RunOutcome {
    pub sound: bool,
    pub summary: String,
}

pub fn build_domain(spec: &DomainSpec, beta: f64) -> robinlab::Result<PolygonDomain> {
    match spec {
        DomainSpec::UnitSquare => Ok(PolygonDomain::unit_square(beta)),
        DomainSpec::Rectangle { width, height } => PolygonDomain::rectangle(*width, *height, [Edge::robin(beta); 4]),
        DomainSpec::Strip { length, width } => PolygonDomain::strip(*length, *width, beta),
        DomainSpec::RegularPolygon { sides, radius } => PolygonDomain::regular_polygon(*sides, *radius, beta),
        DomainSpec::Cusp {
            profile,
            x_min,
            x_max,
            n_boundary,
            right,
        } => build_cusp_polygon(profile, *x_min, *x_max, *n_boundary, *right, beta),
        DomainSpec::Polygon { vertices } => {
            PolygonDomain::new(vertices.clone(), vec![Edge::robin(beta); vertices.len()], vec![])
        }
    }
}

pub fn evaluate_criterion(spec: &CriterionSpec) -> robinlab::Result<CriterionVerdict> {
    match spec {
        CriterionSpec::ExponentM { p, n_dim, a, b } => exponent_m(*p, *n_dim, *a, *b),
        CriterionSpec::Cusp {
            profile,
            n_dim,
            p,
            method,
        } => match method {
            None => cusp_criterion(profile, *n_dim, *p),
            Some(Method::Analytic) => cusp_criterion_analytic(profile, *n_dim, *p),
            Some(Method::Numeric) => cusp_criterion_numeric(profile, *n_dim, *p),
        },
        CriterionSpec::Bbc { profile, n_dim, method } => match method {
            None => bbc_criterion(profile, *n_dim),
            Some(Method::Analytic) => bbc_criterion_analytic(profile, *n_dim),
            Some(Method::Numeric) => bbc_criterion_numeric(profile, *n_dim),
        },
        CriterionSpec::Density { g, n_dim, r, t0 } => {
            let v = density_estimate(*g, *n_dim, *r, *t0)?;
            Ok(CriterionVerdict {
                name: "density".into(),
                inputs: format!("G={g};N={n_dim};r={r};t0={t0}"),
                value: Some(v),
                divergent: false,
                verdict: if v > 0.0 { Verdict::Positive } else { Verdict::Inconclusive },
                method: Method::Analytic,
            })
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut summary = format!("experiment: {}\n", cfg.name);
    let mut sound = true;

    if let Some(spec) = &cfg.domain {
        let domain = build_domain(spec, cfg.run.beta).context("building domain")?;
        let mesh = triangulate_with(&domain, &cfg.mesh.options()).context("meshing")?;
        info!("mesh: {} nodes, {} triangles", mesh.n_nodes(), mesh.n_triangles());
        let mut params = RunParams::new(cfg.run.p, cfg.run.source.clone());
        params.solver = cfg.run.solver;
        let field = minimize(mesh, &params, &[]).context("solving")?;
        info!("solved: energy {:.6e}, {} iterations", field.energy, field.diagnostics.iterations);
        write(out, "solution.csv", &field.to_csv())?;
        write(out, "diagnostics.json", &field.diagnostics_json()?)?;
        let _ = writeln!(
            summary,
            "mesh: {} nodes, {} triangles\nsolution: min {:.6e}, max {:.6e}, energy {:.6e}, newton iterations {}",
            field.mesh.n_nodes(),
            field.mesh.n_triangles(),
            field.min(),
            field.max(),
            field.energy,
            field.diagnostics.iterations
        );

        let ts = interior_grid(field.min(), field.max(), cfg.levels.n);
        let rows = level_table(&field, &ts, cfg.levels.slack);
        write(out, "levels.csv", &level_table_csv(&rows))?;
        let bad = rows.iter().filter(|r| !(r.caccioppoli.ok && r.g_bound.ok)).count();
        let (coarea, g_top) = coarea_check(&field, field.max(), cfg.levels.coarea_points);
        let _ = writeln!(
            summary,
            "level checks: {}/{} levels pass (slack {})\ncoarea: int Pi = {:.6e}, g(max u) = {:.6e}",
            rows.len() - bad,
            rows.len(),
            cfg.levels.slack,
            coarea,
            g_top
        );
        sound &= bad == 0;

        let curve: ProfileCurve = match spec {
            DomainSpec::Cusp { profile, .. } => slice_profile(profile, 2, cfg.run.p, None)?,
            _ => candidate_profile(&domain, cfg.run.p, &cfg.profile.families)?,
        };
        write(out, "profile.csv", &curve.to_csv())?;
        let _ = writeln!(
            summary,
            "profile: {:?} curve, small-m exponent {:.4}, certificate {}",
            curve.kind,
            curve.fit.exponent,
            curve.certificate().as_str()
        );
        if let Ok(cmp) = local_profile_comparison(&curve, domain.area(), 2, cfg.run.p) {
            let _ = writeln!(
                summary,
                "local profile comparison: eps {:.4e}, C {:.4e}, equivalent {}",
                cmp.epsilon, cmp.constant, cmp.equivalent
            );
        }

        if cfg.run.beta > 0.0 {
            let rep = compute_t(&field, &curve, cfg.run.beta, cfg.run.p)?;
            write(out, "positivity.json", &serde_json::to_string_pretty(&rep)?)?;
            summary.push_str(&rep.to_text());
            if rep.status == PositivityStatus::Computed {
                sound &= rep.sound;
            }
        } else {
            write(
                out,
                "positivity.json",
                &serde_json::to_string_pretty(&json!({"status": "skipped", "reason": "beta = 0"}))?,
            )?;
            summary.push_str("positivity: skipped (beta = 0)\n");
        }
    }

    let mut verdicts = Vec::new();
    for (i, c) in cfg.criteria.iter().enumerate() {
        match evaluate_criterion(c) {
            Ok(v) => {
                let _ = writeln!(summary, "criterion {}: {} -> {}", v.name, v.inputs, v.verdict.as_str());
                verdicts.push(v);
            }
            Err(e) => anyhow::bail!("criteria[{i}]: {e}"),
        }
    }
    write(out, "criteria.csv", &verdicts_csv(&verdicts))?;

    if let Some(t) = &cfg.trend {
        let rep: TrendReport = local_positivity_trend(&t.profile, t.p, t.beta, &t.deltas, &t.options)?;
        write(out, "trend.json", &serde_json::to_string_pretty(&rep)?)?;
        let mins: Vec<String> = rep.points.iter().map(|p| format!("{:.4e}", p.min_half)).collect();
        let _ = writeln!(
            summary,
            "trend: classification {} (minima {})",
            serde_json::to_value(rep.class)?.as_str().unwrap_or("?"),
            mins.join(", ")
        );
        if let Some(e) = &rep.error {
            let _ = writeln!(summary, "trend stopped early: {e}");
        }
    }

    let _ = writeln!(summary, "soundness: {}", if sound { "ok" } else { "FAILED" });
    write(out, "summary.txt", &summary)?;
    Ok(RunOutcome { sound, summary })
}
