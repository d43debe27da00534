//! Finite-grid renderings of slow decrease and of the counting-function
//! criteria that characterize it.
//!
//! Every asymptotic statement (`O(.)`, `limsup`) becomes a comparison between
//! the first and the last decade of a geometric grid: a quantity is
//! `Growing` when its last-decade supremum is at least [`GROWTH_RATIO`] times
//! the first-decade supremum, `Bounded` otherwise, and `Undetermined` when
//! the grid spans less than a decade or a value is not finite.

mod counting;
mod definition;
mod integrals;
mod lemma1;

pub use counting::{check_lemma2, check_theorem1};
pub use definition::{check_slow_decrease_def, check_slow_decrease_off_axis, ProbeDeficit};
pub use integrals::{
    check_theorem2, check_theorem3, cond2_quantity, lemma3_diagnostic, lemma4_diagnostic,
    theorem3_quantity, Cond2Report, CriterionReport, DiagnosticValue,
};
pub use lemma1::{lemma1_consistency, Lemma1Params, Lemma1Record};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Last-decade over first-decade ratio at which a quantity counts as growing.
pub const GROWTH_RATIO: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    SlowlyDecreasing,
    NotSlowlyDecreasing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    Growing,
    Undetermined,
}

/// Geometric grid from `lo` to `hi` (inclusive) with `per_decade` points per decade.
pub fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && per_decade > 0);
    let steps = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=steps)
        .map(|k| {
            if k == steps {
                hi
            } else {
                lo * 10f64.powf(k as f64 / per_decade as f64)
            }
        })
        .collect()
}

pub(crate) fn check_grid(name: &'static str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(invalid(name, "grid is empty"));
    }
    if g.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(name, "grid values must be positive and finite"));
    }
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(name, "grid must be strictly increasing"));
    }
    Ok(())
}

/// Suprema of `value` over the first and the last decade of `|t|`.
pub(crate) fn decade_sups(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let lo = samples.iter().map(|s| s.0.abs()).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0.abs()).fold(0.0, f64::max);
    if !(hi >= 10.0 * lo) {
        return None;
    }
    let sup = |keep: &dyn Fn(f64) -> bool| {
        samples
            .iter()
            .filter(|s| keep(s.0.abs()))
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Some((sup(&|t| t <= 10.0 * lo), sup(&|t| t >= hi / 10.0)))
}

/// Trend from decade suprema; `floor` is the smallest last-decade value that
/// may count as growth.
pub(crate) fn classify_trend(sups: Option<(f64, f64)>, floor: f64) -> Trend {
    match sups {
        Some((first, last)) if first.is_finite() && last.is_finite() => {
            if last >= GROWTH_RATIO * first && last > floor {
                Trend::Growing
            } else {
                Trend::Bounded
            }
        }
        _ => Trend::Undetermined,
    }
}

/// Samples of a normalized quantity with its decade trend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub quantity_id: String,
    /// `(t, ratio)` in evaluation order.
    pub samples: Vec<(f64, f64)>,
    pub sup_ratio: f64,
    pub first_decade_sup: f64,
    pub last_decade_sup: f64,
    pub trend: Trend,
}

impl AsymptoticReport {
    pub(crate) fn new(quantity_id: &str, samples: Vec<(f64, f64)>) -> Self {
        let sup_ratio = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let sups = decade_sups(&samples);
        let (first, last) = sups.unwrap_or((f64::NAN, f64::NAN));
        AsymptoticReport {
            quantity_id: quantity_id.to_string(),
            samples,
            sup_ratio,
            first_decade_sup: first,
            last_decade_sup: last,
            trend: classify_trend(sups, 0.0),
        }
    }
}

/// Grids for the definitional check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowDecreaseParams {
    /// Candidate constants `a`, increasing.
    pub a_grid: Vec<f64>,
    /// Positive probe points; each is probed at `+x` and `-x`.
    pub x_grid: Vec<f64>,
    /// Samples per unit length in each window, on top of the midpoints
    /// between consecutive zeros.
    pub window_resolution: f64,
}

impl Default for SlowDecreaseParams {
    fn default() -> Self {
        SlowDecreaseParams {
            a_grid: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            x_grid: geometric_grid(1e2, 1e5, 4),
            window_resolution: 64.0,
        }
    }
}

impl SlowDecreaseParams {
    pub fn validate(&self) -> Result<()> {
        check_grid("a_grid", &self.a_grid)?;
        check_grid("x_grid", &self.x_grid)?;
        if !(self.window_resolution >= 1.0 && self.window_resolution.is_finite()) {
            return Err(invalid("window_resolution", "need at least one point per unit"));
        }
        Ok(())
    }
}

/// A probe where the largest `a` fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Failure {
    pub x: f64,
    /// Largest `ln |phi(x')|` found in the window.
    pub best_log_modulus: f64,
    /// `-a ln(a + |x|)` at the probe.
    pub required: f64,
}

/// Outcome of the definitional check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Smallest grid `a` feasible at every probe.
    pub witness_a: Option<f64>,
    /// Failing probes at the largest `a`.
    pub failures: Vec<Failure>,
    pub grids: SlowDecreaseParams,
    /// Best deficit `max_x' ln|phi(x')| + a ln(a + |x'|)` per `(a, x)`.
    pub deficits: Vec<ProbeDeficit>,
}

/// Grids for the integral criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionGrids {
    #[serde(rename = "A_grid")]
    pub a_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
}

impl Default for CriterionGrids {
    fn default() -> Self {
        CriterionGrids {
            a_grid: vec![2.0, 4.0, 8.0, 16.0, 32.0],
            x_grid: geometric_grid(1e2, 1e5, 8),
        }
    }
}

impl CriterionGrids {
    pub fn validate(&self) -> Result<()> {
        check_grid("A_grid", &self.a_grid)?;
        check_grid("x_grid", &self.x_grid)
    }

    /// Radius needed by the integral criteria on these grids.
    pub fn required_radius(&self) -> f64 {
        let amax = self.a_grid.iter().copied().fold(0.0, f64::max);
        self.x_grid
            .iter()
            .map(|&x| {
                let l = x.ln();
                x * l + x.hypot(amax * l)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(1e2, 1e5, 8);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 100.0);
        assert_eq!(g[24], 1e5);
        assert!((g[8] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn trend_rules() {
        let s = vec![(100.0, 1.0), (1000.0, 1.2), (10_000.0, 1.4)];
        assert_eq!(AsymptoticReport::new("q", s).trend, Trend::Bounded);
        let s = vec![(100.0, 1.0), (1000.0, 1.0), (10_000.0, 1.6)];
        assert_eq!(AsymptoticReport::new("q", s).trend, Trend::Growing);
        let s = vec![(100.0, 1.0), (500.0, 3.0)];
        assert_eq!(AsymptoticReport::new("q", s).trend, Trend::Undetermined);
        assert_eq!(classify_trend(Some((1.0, 2.0)), 3.0), Trend::Bounded);
    }
}
