//! `RunConfig` and its TOML form.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use slowdec::criteria::{CriterionGrids, SlowDecreaseParams};
use slowdec::{Pairing, SequenceSpec, TailPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Eval,
    Counting,
    FavorovCheck,
    PoissonCheck,
    Classify,
    Diagnostics,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// JSON document, see REPORT.md.
    #[default]
    #[value(alias = "json")]
    StructuredReport,
    /// Whitespace-separated series for plotting.
    #[value(alias = "tsv")]
    Tabular,
}

/// Grid overrides; anything left out takes the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(rename = "A_grid", default, skip_serializing_if = "Option::is_none")]
    pub big_a_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_resolution: Option<f64>,
}

impl GridOverrides {
    pub fn definition(&self) -> SlowDecreaseParams {
        let d = SlowDecreaseParams::default();
        SlowDecreaseParams {
            a_grid: self.a_grid.clone().unwrap_or(d.a_grid),
            x_grid: self.x_grid.clone().unwrap_or(d.x_grid),
            window_resolution: self.window_resolution.unwrap_or(d.window_resolution),
        }
    }

    pub fn criteria(&self) -> CriterionGrids {
        let d = CriterionGrids::default();
        CriterionGrids {
            a_grid: self.big_a_grid.clone().unwrap_or(d.a_grid),
            x_grid: self.x_grid.clone().unwrap_or(d.x_grid),
        }
    }
}

/// Samples of `ln |phi(x + iy)|` on `count` evenly spaced points of `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default)]
    pub y: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalOptions {
    /// Probe points as `[re, im]`.
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
    /// Defaults to even form for even sequences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Pairing>,
    #[serde(default)]
    pub policy: TailPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FavorovOptions {
    /// Check on this many seeded random finite sequences instead of `spec`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_sequences: Option<usize>,
    /// Points per random sequence.
    #[serde(default = "default_random_points")]
    pub random_points: usize,
    /// Probes per sequence.
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default = "default_probe_radius")]
    pub probe_radius: f64,
    #[serde(default = "default_favorov_tol")]
    pub tolerance: f64,
}

fn default_random_points() -> usize {
    20
}
fn default_probes() -> usize {
    50
}
fn default_probe_radius() -> f64 {
    100.0
}
fn default_favorov_tol() -> f64 {
    1e-9
}

impl Default for FavorovOptions {
    fn default() -> Self {
        FavorovOptions {
            random_sequences: None,
            random_points: default_random_points(),
            probes: default_probes(),
            probe_radius: default_probe_radius(),
            tolerance: default_favorov_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonOptions {
    #[serde(default = "default_tail_cut")]
    pub tail_cut: f64,
    #[serde(default = "default_step")]
    pub quadrature_step: f64,
    /// Upper half-plane points `[re, im]`; defaults to a 5 x 5 grid with `1 <= im <= 10`.
    #[serde(default = "default_poisson_points")]
    pub points: Vec<[f64; 2]>,
}

fn default_tail_cut() -> f64 {
    1e4
}
fn default_step() -> f64 {
    1.0
}
fn default_poisson_points() -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    for y in [1.0, 2.5, 5.0, 7.5, 10.0] {
        for x in [0.0, 0.5, 3.3, 10.0, 20.0] {
            pts.push([x, y]);
        }
    }
    pts
}

impl Default for PoissonOptions {
    fn default() -> Self {
        PoissonOptions {
            tail_cut: default_tail_cut(),
            quadrature_step: default_step(),
            points: default_poisson_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticOptions {
    #[serde(default = "default_lemma3_x")]
    pub lemma3_x: Vec<f64>,
    /// Upper cut of the first diagnostic; defaults to `100 max(lemma3_x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_upper: Option<f64>,
    #[serde(default = "default_lemma4_x")]
    pub lemma4_x: f64,
    #[serde(rename = "lemma4_A", default = "default_lemma4_a")]
    pub lemma4_a: Vec<f64>,
}

fn default_lemma3_x() -> Vec<f64> {
    vec![1e3, 1e4]
}
fn default_lemma4_x() -> f64 {
    1e4
}
fn default_lemma4_a() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0]
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        DiagnosticOptions {
            lemma3_x: default_lemma3_x(),
            t_upper: None,
            lemma4_x: default_lemma4_x(),
            lemma4_a: default_lemma4_a(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Report file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Everything one run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    /// Materialization radius; derived from the task when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SequenceSpec>,
    #[serde(default)]
    pub grids: GridOverrides,
    #[serde(default)]
    pub eval: EvalOptions,
    #[serde(default)]
    pub favorov: FavorovOptions,
    #[serde(default)]
    pub poisson: PoissonOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticOptions,
    #[serde(default)]
    pub output: OutputOptions,
}

impl RunConfig {
    pub fn new(task: Task, spec: Option<SequenceSpec>) -> Self {
        RunConfig {
            task,
            radius: None,
            seed: 0,
            spec,
            grids: GridOverrides::default(),
            eval: EvalOptions::default(),
            favorov: FavorovOptions::default(),
            poisson: PoissonOptions::default(),
            diagnostics: DiagnosticOptions::default(),
            output: OutputOptions::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("parsing run config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Task-specific required fields and basic ranges.
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.radius {
            ensure!(r.is_finite() && r > 0.0, "radius must be positive, got {r}");
        }
        let needs_spec = !(self.task == Task::FavorovCheck && self.favorov.random_sequences.is_some());
        if needs_spec && self.spec.is_none() {
            bail!("task {:?} needs a sequence spec", self.task);
        }
        match self.task {
            Task::Eval => {
                ensure!(
                    !self.eval.points.is_empty() || self.eval.line.is_some(),
                    "eval needs probe points or a line"
                );
                if let Some(l) = self.eval.line {
                    ensure!(l.lo < l.hi && l.count >= 2, "eval.line needs lo < hi and count >= 2");
                }
            }
            Task::FavorovCheck => {
                ensure!(self.favorov.probes > 0, "favorov.probes must be positive");
                ensure!(self.favorov.probe_radius > 0.0, "favorov.probe_radius must be positive");
                ensure!(self.favorov.random_points > 0, "favorov.random_points must be positive");
            }
            Task::PoissonCheck => {
                ensure!(!self.poisson.points.is_empty(), "poisson.points is empty");
                ensure!(
                    self.poisson.points.iter().all(|p| p[1] > 0.0),
                    "poisson points need positive imaginary parts"
                );
            }
            Task::Counting | Task::Classify => {
                self.grids.definition().validate()?;
                self.grids.criteria().validate()?;
            }
            Task::Diagnostics => {
                ensure!(
                    !self.diagnostics.lemma3_x.is_empty() && !self.diagnostics.lemma4_a.is_empty(),
                    "diagnostics needs lemma3_x and lemma4_A"
                );
            }
        }
        Ok(())
    }

    /// Radius used for materialization: the configured one or the smallest
    /// that the task's grids allow.
    pub fn effective_radius(&self) -> f64 {
        if let Some(r) = self.radius {
            return r;
        }
        let r = match self.task {
            Task::Eval => {
                let mut m: f64 = self.eval.points.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
                if let Some(l) = self.eval.line {
                    m = m.max(l.lo.abs().hypot(l.y)).max(l.hi.abs().hypot(l.y));
                }
                (4.0 * m).max(1e5)
            }
            Task::Counting => 2.0 * self.grids.criteria().x_grid.last().copied().unwrap_or(1.0),
            Task::FavorovCheck => 2.0 * self.favorov.probe_radius,
            Task::PoissonCheck => 2.5 * self.poisson.tail_cut,
            Task::Classify => {
                let def = self.grids.definition();
                let amax = def.a_grid.last().copied().unwrap_or(1.0);
                let xmax = def.x_grid.last().copied().unwrap_or(1.0);
                let window = 2.0 * (xmax + amax * (amax + xmax).ln());
                self.grids.criteria().required_radius().max(window)
            }
            Task::Diagnostics => {
                let d = &self.diagnostics;
                let xmax = d.lemma3_x.iter().copied().fold(0.0, f64::max);
                let t = d.t_upper.unwrap_or(100.0 * xmax);
                (t + xmax).max(100.0 * d.lemma4_x)
            }
        };
        1.05 * r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml() {
        let cfg = RunConfig::from_toml(
            r#"
            task = "classify"
            [spec]
            kind = "integer-lattice"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.task, Task::Classify);
        assert_eq!(cfg.spec, Some(SequenceSpec::integers()));
        assert_eq!(cfg.output.format, Format::StructuredReport);
        assert!(cfg.effective_radius() > 1.25e6);
    }

    #[test]
    fn eval_without_points_is_rejected() {
        let err = RunConfig::from_toml(
            r#"
            task = "eval"
            [spec]
            kind = "integer-lattice"
            "#,
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("probe points"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("task = \"eval\"\nradiuss = 3\n").is_err());
    }

    #[test]
    fn nested_specs_parse() {
        let cfg = RunConfig::from_toml(
            r#"
            task = "counting"
            [spec]
            kind = "union"
            [[spec.parts]]
            kind = "even-closure"
            base = { kind = "perturbed", offset = "ln_sq", positive_only = true }
            [[spec.parts]]
            kind = "even-closure"
            base = { kind = "exp-sqrt" }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.spec, Some(slowdec::fixtures::log_squared_union()));
    }
}
