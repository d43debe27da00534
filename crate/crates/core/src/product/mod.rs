//! Log-moduli of canonical products `prod (1 - z/lambda)`.
//!
//! [`ProductEvaluator`] sums `m ln|1 - z/lambda|` over the materialized zeros
//! in increasing modulus with compensated summation. The zeros beyond the
//! materialization radius are either modeled (generator-aware tail sum, the
//! default) or dropped and bounded from the density ([`TailPolicy`]).

mod phi0;
mod window;

pub use phi0::{eval_phi0_log, Phi0};
pub use window::LineWindow;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cx::ln_abs_one_minus;
use crate::error::{Error, Result};
use crate::seq::ZeroSequence;
use crate::sum::NeumaierSum;

/// How partial products are grouped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// `prod_{|lambda| <= R} (1 - z/lambda)`, terms in modulus order.
    PrincipalValue,
    /// `prod (1 - z^2/lambda^2)` over one representative of each `+-lambda`.
    EvenForm,
}

/// Treatment of the zeros beyond the materialization radius.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailPolicy {
    /// Add the generator's tail sum; the bound covers only its numerical error.
    /// Falls back to `Truncated` when the generator has no convergent model.
    #[default]
    Modeled,
    /// Drop the tail; bound it by `|ln(1 - w)| <= 2|w|` and the density.
    Truncated,
}

/// `ln |phi(z)|` with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogModulus {
    /// `-inf` exactly when `at_zero`.
    pub value: f64,
    /// Bound on `|ln|phi(z)| - value|`: the tail plus summation rounding.
    pub tail_bound: f64,
    pub at_zero: bool,
    /// Sum over the materialized zeros only.
    pub partial_sum: f64,
    /// Modeled tail included in `value` (zero when truncated).
    pub tail_correction: f64,
}

impl LogModulus {
    pub(crate) fn at_zero() -> Self {
        LogModulus {
            value: f64::NEG_INFINITY,
            tail_bound: 0.0,
            at_zero: true,
            partial_sum: f64::NEG_INFINITY,
            tail_correction: 0.0,
        }
    }
}

/// Rounding allowance per unit of absolute term mass, in ulps.
const ROUNDING_ULPS: f64 = 8.0;

/// Anything that can report `ln |phi|` off and on the real axis.
pub trait LogModulusSource: Sync {
    fn log_modulus(&self, z: Complex64) -> Result<LogModulus>;

    /// Largest `|z|` at which evaluation is valid.
    fn valid_radius(&self) -> f64;

    /// Sorted distinct real parts of zeros in `[lo, hi]`.
    fn zero_abscissae(&self, lo: f64, hi: f64) -> Vec<f64>;

    /// `ln |phi(x + iy)|` at sorted `xs`; `-inf` at zeros, `NaN` where the
    /// value is undefined.
    fn scan_line(&self, y: f64, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter()
            .map(|&x| match self.log_modulus(Complex64::new(x, y)) {
                Ok(l) => Ok(l.value),
                Err(Error::PoleCandidate { .. }) => Ok(f64::NAN),
                Err(e) => Err(e),
            })
            .collect()
    }
}

/// A zero as stored by the evaluator: value and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Weighted {
    pub value: Complex64,
    pub mult: f64,
}

/// Truncation-bound ingredients computed once per evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TruncationStats {
    /// Density bound `Delta_eff` with `n(0, t) <= 2 Delta_eff t` beyond the radius.
    delta_eff: f64,
    /// `|n_+(R) - n_-(R)|`.
    imbalance: f64,
    /// Fitted `c` in `|n_+(t) - n_-(t)| <= c ln^2 t` over `[R/2, R]`.
    imbalance_slope: f64,
}

/// Canonical-product evaluator over a materialized sequence.
#[derive(Debug, Clone)]
pub struct ProductEvaluator<'a> {
    seq: &'a ZeroSequence,
    pairing: Pairing,
    policy: TailPolicy,
    exclusion: Option<f64>,
    /// Zeros sorted by real part.
    by_re: Vec<Weighted>,
    stats: Option<TruncationStats>,
}

impl<'a> ProductEvaluator<'a> {
    pub fn new(seq: &'a ZeroSequence, pairing: Pairing) -> Result<Self> {
        if pairing == Pairing::EvenForm && !seq.is_even() {
            return Err(Error::NotEven);
        }
        let mut by_re: Vec<Weighted> = seq
            .points()
            .iter()
            .map(|p| Weighted {
                value: p.value,
                mult: p.multiplicity as f64,
            })
            .collect();
        by_re.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        let stats = truncation_stats(seq);
        Ok(ProductEvaluator {
            seq,
            pairing,
            policy: TailPolicy::Modeled,
            exclusion: None,
            by_re,
            stats,
        })
    }

    /// Even-form when the sequence is even, principal value otherwise.
    pub fn auto(seq: &'a ZeroSequence) -> Self {
        let pairing = if seq.is_even() {
            Pairing::EvenForm
        } else {
            Pairing::PrincipalValue
        };
        Self::new(seq, pairing).expect("pairing matches the sequence")
    }

    pub fn with_policy(mut self, policy: TailPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Fixed exclusion radius instead of the default `1e-12 max(1, |z|)`.
    pub fn with_exclusion_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(crate::error::invalid("exclusion_radius", "must be positive"));
        }
        self.exclusion = Some(r);
        Ok(self)
    }

    pub fn sequence(&self) -> &'a ZeroSequence {
        self.seq
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn policy(&self) -> TailPolicy {
        self.policy
    }

    pub fn exclusion_radius(&self, z: Complex64) -> f64 {
        self.exclusion.unwrap_or(1e-12 * z.norm().max(1.0))
    }

    pub(crate) fn zeros_by_re(&self) -> &[Weighted] {
        &self.by_re
    }

    /// Index range of zeros with real part in `[lo, hi]`.
    pub(crate) fn re_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.by_re.partition_point(|w| w.value.re < lo);
        let b = self.by_re.partition_point(|w| w.value.re <= hi);
        a..b.max(a)
    }

    fn near_zero(&self, z: Complex64) -> bool {
        let eps = self.exclusion_radius(z);
        self.by_re[self.re_range(z.re - eps, z.re + eps)]
            .iter()
            .any(|w| (w.value - z).norm() < eps)
    }

    fn check_region(&self, z: Complex64) -> Result<()> {
        let r = self.seq.radius();
        if !self.seq.is_complete() && z.norm() > r / 2.0 {
            return Err(Error::OutsideTailRegion {
                z,
                required: 2.0 * z.norm(),
                radius: r,
            });
        }
        Ok(())
    }

    /// Sum over the materialized zeros under the chosen pairing.
    pub fn partial_sum(&self, z: Complex64) -> f64 {
        self.partial_sum_with_mass(z).0
    }

    /// Partial sum and the sum of absolute terms, which scales its rounding error.
    fn partial_sum_with_mass(&self, z: Complex64) -> (f64, f64) {
        let mut s = NeumaierSum::new();
        let mut mass = 0.0;
        let mut add = |t: f64| {
            s.add(t);
            mass += t.abs();
        };
        match self.pairing {
            Pairing::PrincipalValue => {
                for p in self.seq.points() {
                    add(p.multiplicity as f64 * ln_abs_one_minus(z, p.value));
                }
            }
            Pairing::EvenForm => {
                for p in self.seq.points() {
                    let v = p.value;
                    if v.re > 0.0 || (v.re == 0.0 && v.im > 0.0) {
                        let pair = ln_abs_one_minus(z, v) + ln_abs_one_minus(z, -v);
                        add(p.multiplicity as f64 * pair);
                    }
                }
            }
        }
        (s.value(), mass)
    }

    /// Tail contribution and its bound under the active policy.
    pub(crate) fn tail(&self, z: Complex64) -> (f64, f64) {
        if self.seq.is_complete() {
            return (0.0, 0.0);
        }
        if self.policy == TailPolicy::Modeled {
            if let Some(t) = self.seq.tail_sum(z) {
                return (t.value, t.error);
            }
        }
        (0.0, self.truncation_bound(z))
    }

    /// Density-based bound on the dropped tail.
    ///
    /// Paired terms satisfy `|ln|1 - z^2/lambda^2|| <= 2|z|^2/lambda^2` for
    /// `|z| <= R/2`; unpaired principal-value sums add the first-order term
    /// `|z| |sum 1/lambda|`, controlled by the counting imbalance
    /// `n_+ - n_-` extrapolated as `c ln^2 t`.
    pub fn truncation_bound(&self, z: Complex64) -> f64 {
        if self.seq.is_complete() {
            return 0.0;
        }
        let Some(st) = self.stats else {
            return f64::INFINITY;
        };
        let r = self.seq.radius();
        let zn = z.norm();
        let second = 2.0 * zn * zn * 2.0 * (2.0 * st.delta_eff) / r;
        if self.seq.is_even() {
            return second;
        }
        let lr = r.ln();
        let mut first =
            st.imbalance / r + st.imbalance_slope * (lr * lr + 2.0 * lr + 2.0) / r;
        if let Some(m0) = self.seq.m0() {
            // sum Im(1/lambda) over the tail, |Im lambda| <= M0 ln|lambda|
            first += m0 * 2.0 * (2.0 * st.delta_eff) * (lr + 1.0) / r;
        }
        zn * first + second
    }

    /// `ln |phi(z)|` with tail bound.
    pub fn log_abs(&self, z: Complex64) -> Result<LogModulus> {
        self.check_region(z)?;
        if self.near_zero(z) {
            return Ok(LogModulus::at_zero());
        }
        let (partial, mass) = self.partial_sum_with_mass(z);
        let (tail, bound) = self.tail(z);
        // Each term carries a few ulps relative to its own size.
        let rounding = ROUNDING_ULPS * f64::EPSILON * (mass + tail.abs());
        Ok(LogModulus {
            value: partial + tail,
            tail_bound: bound + rounding,
            at_zero: false,
            partial_sum: partial,
            tail_correction: tail,
        })
    }

    /// Windowed evaluator for many points on the line `Im z = y`.
    pub fn line_window(&self, y: f64, lo: f64, hi: f64) -> Result<LineWindow> {
        LineWindow::new(self, y, lo, hi)
    }
}

/// `ln |phi(z)|` (free-function form).
pub fn log_abs_product(ev: &ProductEvaluator<'_>, z: Complex64) -> Result<LogModulus> {
    ev.log_abs(z)
}

fn truncation_stats(seq: &ZeroSequence) -> Option<TruncationStats> {
    if seq.is_complete() {
        return None;
    }
    let r = seq.radius();
    let observed = seq.total_multiplicity() as f64 / (2.0 * r);
    let delta_eff = match seq.density_estimate() {
        Ok(d) => (d.delta + d.spread).max(observed),
        Err(_) => return None,
    };
    let (imbalance, imbalance_slope) = if seq.is_even() {
        (0.0, 0.0)
    } else {
        // Points are stored in modulus order: one pass samples the running
        // imbalance at 65 radii in [R/2, R].
        let marks: Vec<f64> = (0..=64).map(|k| r * (0.5 + k as f64 / 128.0)).collect();
        let mut acc: f64 = 0.0;
        let mut k = 0;
        let mut slope: f64 = 0.0;
        for p in seq.points() {
            let m = p.value.norm();
            while k < marks.len() && m > marks[k] {
                let l = marks[k].ln();
                slope = slope.max(acc.abs() / (l * l));
                k += 1;
            }
            acc += if p.value.re > 0.0 { 1.0 } else { -1.0 } * p.multiplicity as f64;
        }
        let lr = r.ln();
        slope = slope.max(acc.abs() / (lr * lr));
        (acc.abs(), slope)
    };
    Some(TruncationStats {
        delta_eff,
        imbalance,
        imbalance_slope,
    })
}

impl LogModulusSource for ProductEvaluator<'_> {
    fn log_modulus(&self, z: Complex64) -> Result<LogModulus> {
        self.log_abs(z)
    }

    fn valid_radius(&self) -> f64 {
        if self.seq.is_complete() {
            f64::INFINITY
        } else {
            self.seq.radius() / 2.0
        }
    }

    fn zero_abscissae(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.by_re[self.re_range(lo, hi)]
            .iter()
            .map(|w| w.value.re)
            .collect();
        v.dedup();
        v
    }

    fn scan_line(&self, y: f64, xs: &[f64]) -> Result<Vec<f64>> {
        if xs.is_empty() {
            return Ok(vec![]);
        }
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w = self.line_window(y, lo, hi)?;
        Ok(xs.iter().map(|&x| w.eval(x)).collect())
    }
}
