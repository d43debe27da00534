use serde::{Deserialize, Serialize};

use super::counting::check_lemma2;
use super::definition::check_slow_decrease_off_axis;
use super::integrals::{check_theorem3, CriterionReport};
use super::{AsymptoticReport, CriterionGrids, Outcome, SlowDecreaseParams, Trend, Verdict};
use crate::error::Result;
use crate::product::ProductEvaluator;
use crate::seq::ZeroSequence;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Params {
    /// Grids for the definitional check of the original sequence.
    pub definition: SlowDecreaseParams,
    /// Grids for the criteria applied to the projection.
    pub criteria: CriterionGrids,
}

/// Classifications of a complex zero set and of its real projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Record {
    /// `M0` used as the probe-line slope factor (0 for real input).
    pub m0: f64,
    pub projected_radius: f64,
    /// Theorem 3 on `{Re mu}`.
    pub projected: CriterionReport,
    /// Lemma 2 on `{Re mu}`.
    pub projected_lemma2: AsymptoticReport,
    /// Definitional check of the original on `Im z = +-2 M0 ln|x|`.
    pub original: Verdict,
    /// Lemma 2 on the original, with discs centred at the zeros.
    pub original_lemma2: AsymptoticReport,
    /// Theorem 3 outcome, overridden by a growing Lemma 2 ratio.
    pub projected_outcome: Outcome,
    /// Definitional outcome, overridden by a growing Lemma 2 ratio.
    pub original_outcome: Outcome,
    pub agree: bool,
}

/// Compare the classification of `mu` with that of `Re mu`.
///
/// The projection is classified with [`check_theorem3`]; the original with
/// the definitional scan on the lines `Im z = +-2 M0 ln|x|`, where the zeros
/// satisfy `|Im mu| <= M0 max(1, ln|mu|)`. Lemma 2 is a necessary condition on
/// either side: when its ratio grows, that side is not slowly decreasing
/// whatever the scan finds, since a product with excess multiplicities can
/// be large on the probe lines while failing to have polynomial growth.
pub fn lemma1_consistency(seq: &ZeroSequence, params: &Lemma1Params) -> Result<Lemma1Record> {
    let m0 = seq.m0().unwrap_or(0.0);
    let projected = seq.project_real()?;
    let criterion = check_theorem3(&projected, &params.criteria)?;
    let lemma2 = check_lemma2(&projected, &params.criteria.x_grid)?;
    let ev = ProductEvaluator::auto(seq);
    let original = check_slow_decrease_off_axis(&ev, &params.definition, 2.0 * m0)?;
    let original_lemma2 = check_lemma2(seq, &params.criteria.x_grid)?;
    let necessary = |l2: &AsymptoticReport, o: Outcome| {
        if l2.trend == Trend::Growing {
            Outcome::NotSlowlyDecreasing
        } else {
            o
        }
    };
    let projected_outcome = necessary(&lemma2, criterion.outcome);
    let original_outcome = necessary(&original_lemma2, original.outcome);
    let agree = match (projected_outcome, original_outcome) {
        (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => false,
        (a, b) => a == b,
    };
    Ok(Lemma1Record {
        m0,
        projected_radius: projected.radius(),
        projected: criterion,
        projected_lemma2: lemma2,
        original,
        original_lemma2,
        projected_outcome,
        original_outcome,
        agree,
    })
}
