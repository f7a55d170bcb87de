//! Experiment configuration: versioned JSON, validated with field paths.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use robinlab::bounds::TrendOptions;
use robinlab::criteria::Method;
use robinlab::geometry::CuspEnd;
use robinlab::meshing::{Grading, MeshOptions};
use robinlab::profile::CandidateFamily;
use robinlab::solver::SolverOptions;
use robinlab::{Point, ProfileFunction, Source};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub mesh: MeshSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub levels: LevelSpec,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default)]
    pub criteria: Vec<CriterionSpec>,
    #[serde(default)]
    pub trend: Option<TrendSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    /// Output directory; the `--out` flag takes precedence.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_name() -> String {
    "experiment".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    UnitSquare,
    Rectangle {
        width: f64,
        height: f64,
    },
    /// `[0, length] x [0, width]` with Robin ends and natural long sides.
    Strip {
        length: f64,
        width: f64,
    },
    RegularPolygon {
        sides: usize,
        radius: f64,
    },
    Cusp {
        profile: ProfileFunction,
        #[serde(default)]
        x_min: f64,
        #[serde(default = "one")]
        x_max: f64,
        #[serde(default = "default_n_boundary")]
        n_boundary: usize,
        #[serde(default = "default_cusp_end")]
        right: CuspEnd,
    },
    /// Counterclockwise vertex list, all edges Robin.
    Polygon {
        vertices: Vec<Point>,
    },
}

fn one() -> f64 {
    1.0
}

fn default_n_boundary() -> usize {
    64
}

fn default_cusp_end() -> CuspEnd {
    CuspEnd::Robin
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshSpec {
    pub h_target: f64,
    pub grading: Grading,
    pub min_angle: f64,
    pub max_elements: usize,
}

impl Default for MeshSpec {
    fn default() -> Self {
        let o = MeshOptions::new(0.05);
        MeshSpec {
            h_target: o.h_target,
            grading: Grading::none(),
            min_angle: o.min_angle,
            max_elements: o.max_elements,
        }
    }
}

impl MeshSpec {
    pub fn options(&self) -> MeshOptions {
        MeshOptions {
            h_target: self.h_target,
            grading: self.grading,
            min_angle: self.min_angle,
            max_elements: self.max_elements,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub p: f64,
    pub beta: f64,
    pub source: Source,
    pub solver: SolverOptions,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            p: 2.0,
            beta: 1.0,
            source: Source::Constant(1.0),
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelSpec {
    /// Number of interior levels checked.
    pub n: usize,
    pub slack: f64,
    /// Points of the coarea trapezoid.
    pub coarea_points: usize,
}

impl Default for LevelSpec {
    fn default() -> Self {
        LevelSpec {
            n: 20,
            slack: robinlab::levelsets::DEFAULT_SLACK,
            coarea_points: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSpec {
    pub families: Vec<CandidateFamily>,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec {
            families: CandidateFamily::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CriterionSpec {
    ExponentM {
        p: f64,
        #[serde(default = "two")]
        n_dim: usize,
        a: f64,
        b: f64,
    },
    Cusp {
        profile: ProfileFunction,
        #[serde(default = "two")]
        n_dim: usize,
        p: f64,
        #[serde(default)]
        method: Option<Method>,
    },
    Bbc {
        profile: ProfileFunction,
        #[serde(default = "two")]
        n_dim: usize,
        #[serde(default)]
        method: Option<Method>,
    },
    Density {
        g: f64,
        #[serde(default = "two")]
        n_dim: usize,
        r: f64,
        t0: f64,
    },
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendSpec {
    pub profile: ProfileFunction,
    #[serde(default = "two_f")]
    pub p: f64,
    #[serde(default = "one")]
    pub beta: f64,
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub options: TrendOptions,
}

fn two_f() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Power,
    PowerLog,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_family")]
    pub family: SweepFamily,
    #[serde(default)]
    pub alpha: Vec<f64>,
    /// Log exponents; ignored for the pure power family.
    #[serde(default = "zero_vec")]
    pub gamma: Vec<f64>,
    #[serde(default = "two_vec")]
    pub p: Vec<f64>,
    #[serde(default = "one_vec")]
    pub beta: Vec<f64>,
    #[serde(default = "two")]
    pub n_dim: usize,
    /// When set, every cell also runs the truncated-cusp trend.
    #[serde(default)]
    pub trend_deltas: Option<Vec<f64>>,
}

fn default_family() -> SweepFamily {
    SweepFamily::Power
}
fn zero_vec() -> Vec<f64> {
    vec![0.0]
}
fn two_vec() -> Vec<f64> {
    vec![2.0]
}
fn one_vec() -> Vec<f64> {
    vec![1.0]
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow::anyhow!("schema violation at `{path}`: {}", e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks the deserializer cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("schema violation at `schema_version`: expected {SCHEMA_VERSION}, got {}", self.schema_version);
        }
        check(self.run.p > 1.0, "run.p", "must exceed 1")?;
        check(self.run.beta >= 0.0, "run.beta", "must be nonnegative")?;
        check(self.mesh.h_target > 0.0, "mesh.h_target", "must be positive")?;
        check(self.levels.n > 0, "levels.n", "must be positive")?;
        check(self.levels.slack >= 0.0, "levels.slack", "must be nonnegative")?;
        check(!self.profile.families.is_empty(), "profile.families", "must name at least one family")?;
        for (i, c) in self.criteria.iter().enumerate() {
            let ok = match c {
                CriterionSpec::ExponentM { p, .. } | CriterionSpec::Cusp { p, .. } => *p > 1.0,
                _ => true,
            };
            check(ok, &format!("criteria[{i}].p"), "must exceed 1")?;
        }
        if let Some(t) = &self.trend {
            check(t.p > 1.0, "trend.p", "must exceed 1")?;
            check(t.beta >= 0.0, "trend.beta", "must be nonnegative")?;
            check(!t.deltas.is_empty(), "trend.deltas", "must not be empty")?;
        }
        if let Some(s) = &self.sweep {
            check(s.p.iter().all(|&p| p > 1.0), "sweep.p", "every value must exceed 1")?;
            check(s.beta.iter().all(|&b| b >= 0.0), "sweep.beta", "every value must be nonnegative")?;
        }
        Ok(())
    }
}

fn check(ok: bool, path: &str, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        bail!("schema violation at `{path}`: {msg}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = ExperimentConfig::parse(r#"{"schema_version": 1, "domain": {"kind": "unit_square"}}"#).unwrap();
        assert_eq!(cfg.run.p, 2.0);
        assert_eq!(cfg.levels.n, 20);
        assert_eq!(cfg.profile.families.len(), 4);
    }

    #[test]
    fn errors_carry_field_paths() {
        let err = ExperimentConfig::parse(r#"{"schema_version": 1, "run": {"p": "two"}}"#).unwrap_err();
        assert!(format!("{err:#}").contains("run.p"), "{err:#}");
        let err = ExperimentConfig::parse(r#"{"schema_version": 1, "run": {"p": 0.5}}"#).unwrap_err();
        assert!(format!("{err:#}").contains("run.p"), "{err:#}");
        let err = ExperimentConfig::parse(r#"{"schema_version": 2}"#).unwrap_err();
        assert!(format!("{err:#}").contains("schema_version"));
        let err = ExperimentConfig::parse(r#"{"schema_version": 1, "profile": {"families": ["spirals"]}}"#).unwrap_err();
        assert!(format!("{err:#}").contains("profile.families"), "{err:#}");
    }

    #[test]
    fn cusp_domain_parses() {
        let cfg = ExperimentConfig::parse(
            r#"{"schema_version": 1, "domain": {"kind": "cusp", "profile": {"family": "power", "alpha": 1.5}, "x_min": 0.05}}"#,
        )
        .unwrap();
        assert!(matches!(cfg.domain, Some(DomainSpec::Cusp { x_max, .. }) if x_max == 1.0));
    }
}
