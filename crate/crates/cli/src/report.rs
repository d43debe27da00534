//! Report assembly and the two output formats.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::tasks::{
    ClassifyResults, CountingResults, DiagnosticsResults, EvalResults, FavorovResults,
    PoissonResults, SequenceSummary,
};

/// Bumped whenever a field is renamed or removed.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Results {
    Eval(EvalResults),
    Counting(CountingResults),
    FavorovCheck(FavorovResults),
    PoissonCheck(PoissonResults),
    Classify(ClassifyResults),
    Diagnostics(DiagnosticsResults),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: &'static str,
    pub config: RunConfig,
    pub sequence: Option<SequenceSummary>,
    pub results: Results,
}

impl Report {
    /// Whether every oracle check in the report stayed within its tolerance.
    pub fn checks_passed(&self) -> bool {
        match &self.results {
            Results::FavorovCheck(f) => f.within_tolerance,
            Results::PoissonCheck(p) => p.all_within_estimate,
            _ => true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::StructuredReport => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Tabular => self.tabular(),
        }
    }

    fn tabular(&self) -> String {
        let mut out = String::new();
        let mut table = |name: &str, header: &[&str], rows: Vec<Vec<f64>>| {
            let _ = writeln!(out, "# {name}");
            let _ = writeln!(out, "{}", header.join("\t"));
            for r in rows {
                let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
            out.push('\n');
        };
        match &self.results {
            Results::Eval(e) => {
                table(
                    "points",
                    &["re", "im", "ln_abs_phi", "tail_bound"],
                    e.points
                        .iter()
                        .map(|p| vec![p.re, p.im, p.log_modulus.value, p.log_modulus.tail_bound])
                        .collect(),
                );
                table(
                    "line",
                    &["x", "y", "ln_abs_phi", "truncation_bound"],
                    e.line.iter().map(|l| vec![l.x, l.y, l.log_modulus, l.tail_bound]).collect(),
                );
            }
            Results::Counting(c) => {
                table(
                    "counting",
                    &["t", "nu", "L", "L_over_ln2"],
                    c.samples
                        .iter()
                        .map(|s| vec![s.t, s.nu as f64, s.deviation, s.normalized])
                        .collect(),
                );
                table(
                    "lemma2",
                    &["x", "ratio"],
                    c.lemma2.samples.iter().map(|&(x, r)| vec![x, r]).collect(),
                );
            }
            Results::FavorovCheck(f) => table(
                "residuals",
                &["sequence", "re", "im", "product", "favorov", "residual"],
                f.residuals
                    .iter()
                    .map(|r| vec![r.sequence as f64, r.re, r.im, r.product, r.favorov, r.residual])
                    .collect(),
            ),
            Results::PoissonCheck(p) => table(
                "poisson",
                &["re", "im", "poisson", "product", "residual", "estimate"],
                p.rows
                    .iter()
                    .map(|r| vec![r.re, r.im, r.poisson.value, r.product, r.residual, r.estimate])
                    .collect(),
            ),
            Results::Classify(c) => {
                table(
                    "window_maxima",
                    &["a", "x", "best_x", "ln_abs_phi", "deficit"],
                    c.definitional
                        .deficits
                        .iter()
                        .map(|d| vec![d.a, d.x, d.best_x, d.best_log_modulus, d.deficit])
                        .collect(),
                );
                if let Some(r) = &c.criterion {
                    table(
                        "condition1",
                        &["t", "L_over_ln2"],
                        r.cond1.samples.iter().map(|&(t, v)| vec![t, v]).collect(),
                    );
                    let mut rows = Vec::new();
                    for (i, a) in r.cond2.a_grid.iter().enumerate() {
                        for (j, x) in r.cond2.x_grid.iter().enumerate() {
                            rows.push(vec![*a, *x, r.cond2.values[i][j]]);
                        }
                    }
                    table("condition2", &["A", "x", "value"], rows);
                }
                table(
                    "lemma2",
                    &["x", "ratio"],
                    c.lemma2.samples.iter().map(|&(x, r)| vec![x, r]).collect(),
                );
            }
            Results::Diagnostics(d) => {
                table(
                    "lemma3",
                    &["x", "value", "normalized", "upper", "tail_estimate"],
                    d.lemma3
                        .iter()
                        .map(|v| vec![v.x, v.value, v.normalized, v.upper, v.tail_estimate])
                        .collect(),
                );
                table(
                    "lemma4",
                    &["A", "x", "value", "normalized", "upper", "tail_estimate"],
                    d.lemma4
                        .iter()
                        .map(|r| {
                            let v = &r.value;
                            vec![r.a, v.x, v.value, v.normalized, v.upper, v.tail_estimate]
                        })
                        .collect(),
                );
            }
        }
        out
    }
}
