//! Integrals of counting functions against `dt/t`.
//!
//! Each zero `a` enters `int_lo^hi n(c, t)/t dt` as `ln(hi / clamp(|a - c|, lo, hi))`,
//! so every quantity here is a finite sum of clamped logarithms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::counting::{check_theorem1, density_of};
use super::{classify_trend, decade_sups, AsymptoticReport, CriterionGrids, Outcome, Trend};
use crate::error::{Error, Result};
use crate::seq::ZeroSequence;
use crate::sum::NeumaierSum;

#[inline]
fn ln_clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.clamp(lo, hi).ln()
}

fn require_even_real(seq: &ZeroSequence) -> Result<()> {
    seq.real_sorted()?;
    if !seq.is_even() {
        return Err(Error::NotEven);
    }
    Ok(())
}

fn require_radius(seq: &ZeroSequence, needed: f64) -> Result<()> {
    if !seq.is_complete() && needed > seq.radius() {
        return Err(Error::BeyondRadius {
            t: needed,
            radius: seq.radius(),
        });
    }
    Ok(())
}

/// Real zeros with values in `[lo, hi]` as `(value, multiplicity)`.
fn real_zeros_in(seq: &ZeroSequence, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
    let (values, cum) = seq.real_sorted()?;
    let i = values.partition_point(|&v| v < lo);
    let j = values.partition_point(|&v| v <= hi);
    Ok((i..j.max(i))
        .map(|k| (values[k], (cum[k + 1] - cum[k]) as f64))
        .collect())
}

/// `(1/(A ln x)) |int_{A ln x}^{x ln x} (n(0,t) - n(x + iA ln x, t)) / t dt|`.
///
/// Returns 0 when the range is empty (`A >= x`).
pub fn cond2_quantity(seq: &ZeroSequence, a: f64, x: f64) -> Result<f64> {
    require_even_real(seq)?;
    if !(a > 0.0 && x > 1.0) {
        return Err(crate::error::invalid("A, x", "need A > 0 and x > 1"));
    }
    let c = a * x.ln();
    let h = x * x.ln();
    if c >= h {
        return Ok(0.0);
    }
    let w = Complex64::new(x, c);
    require_radius(seq, h + w.norm())?;
    // Zeros outside [-h, x + h] are beyond both discs and contribute nothing.
    let mut s = NeumaierSum::new();
    for (v, m) in real_zeros_in(seq, -h, x + h)? {
        s.add(m * (ln_clamp((v - x).hypot(c), c, h) - ln_clamp(v.abs(), c, h)));
    }
    Ok(s.value().abs() / c)
}

/// The normalized integral of `2L*(t) - L*(x + r) + L*(x - r)` over
/// `[A ln x, x ln x]`, `r = sqrt(t^2 - A^2 ln^2 x)`, `L*(t) = L(t) - L(-t)`.
///
/// The counting part of `L*` depends only on `|lambda|`, and the substitution
/// `t = |u - w|` turns each zero into clamped logarithms of its distances to
/// `w = x + iA ln x` from `+-|lambda|`. The `Delta t` part integrates to
/// `4 Delta [(H - c) - sqrt(H^2 - c^2) + c arccos(c/H)]` with `c = A ln x`,
/// `H = x ln x`.
pub fn theorem3_quantity(seq: &ZeroSequence, delta: f64, a: f64, x: f64) -> Result<f64> {
    seq.real_sorted()?;
    if !(a > 0.0 && x > 1.0) {
        return Err(crate::error::invalid("A, x", "need A > 0 and x > 1"));
    }
    let c = a * x.ln();
    let h = x * x.ln();
    if c >= h {
        return Ok(0.0);
    }
    let w = Complex64::new(x, c);
    let reach = h + w.norm();
    require_radius(seq, reach)?;
    let mut s = NeumaierSum::new();
    for (v, m) in real_zeros_in(seq, -reach, reach)? {
        let r = v.abs();
        let term = ln_clamp((r - x).hypot(c), c, h) + ln_clamp((r + x).hypot(c), c, h)
            - 2.0 * ln_clamp(r, c, h);
        s.add(m * term);
    }
    let linear = 4.0 * delta * ((h - c) - (h * h - c * c).sqrt() + c * (c / h).acos());
    s.add(-linear);
    Ok(s.value().abs() / c)
}

/// Matrix of a normalized integral over `(A, x)` with its double-limsup reduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cond2Report {
    #[serde(rename = "A_grid")]
    pub a_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    /// `values[i][j]` at `(A_grid[i], x_grid[j])`.
    pub values: Vec<Vec<f64>>,
    pub first_decade_sup: Vec<f64>,
    pub last_decade_sup: Vec<f64>,
    /// Per `A`; growth also needs the last-decade sup above `bound_reference`.
    pub trends: Vec<Trend>,
    /// Max over `A` of the last-decade sup over `x`.
    pub double_limsup_estimate: f64,
    pub bound_reference: f64,
}

impl Cond2Report {
    fn build(
        grids: &CriterionGrids,
        bound_reference: f64,
        f: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
    ) -> Result<Self> {
        grids.validate()?;
        let cells: Vec<(usize, usize)> = (0..grids.a_grid.len())
            .flat_map(|i| (0..grids.x_grid.len()).map(move |j| (i, j)))
            .collect();
        let flat: Vec<f64> = cells
            .par_iter()
            .map(|&(i, j)| f(grids.a_grid[i], grids.x_grid[j]))
            .collect::<Result<_>>()?;
        let values: Vec<Vec<f64>> = flat
            .chunks(grids.x_grid.len())
            .map(|r| r.to_vec())
            .collect();
        let mut first = Vec::new();
        let mut last = Vec::new();
        let mut trends = Vec::new();
        for row in &values {
            let samples: Vec<(f64, f64)> =
                grids.x_grid.iter().copied().zip(row.iter().copied()).collect();
            let sups = decade_sups(&samples);
            let (f, l) = sups.unwrap_or((f64::NAN, f64::NAN));
            first.push(f);
            last.push(l);
            trends.push(classify_trend(sups, bound_reference));
        }
        let estimate = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Cond2Report {
            a_grid: grids.a_grid.clone(),
            x_grid: grids.x_grid.clone(),
            values,
            first_decade_sup: first,
            last_decade_sup: last,
            trends,
            double_limsup_estimate: estimate,
            bound_reference,
        })
    }
}

/// Outcome of an integral criterion with both conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub outcome: Outcome,
    pub delta: f64,
    pub cond1: AsymptoticReport,
    pub cond2: Cond2Report,
}

fn decide(cond1: &AsymptoticReport, cond2: &Cond2Report) -> Outcome {
    if cond1.trend == Trend::Growing || cond2.trends.contains(&Trend::Growing) {
        Outcome::NotSlowlyDecreasing
    } else if cond1.trend == Trend::Bounded && cond2.trends.iter().all(|t| *t == Trend::Bounded) {
        Outcome::SlowlyDecreasing
    } else {
        Outcome::Inconclusive
    }
}

/// Criterion for even real zero sets: `n+(0; x) - Delta x = O(ln^2 x)` and
/// the double limsup of [`cond2_quantity`] is finite.
///
/// Condition 2 fails for an `A` when its last-decade sup is at least
/// 1.5 times the first-decade sup and exceeds `pi Delta`; any failing `A`
/// makes the outcome not-slowly-decreasing.
pub fn check_theorem2(seq: &ZeroSequence, grids: &CriterionGrids) -> Result<CriterionReport> {
    require_even_real(seq)?;
    grids.validate()?;
    let delta = density_of(seq)?;
    let cond1 = check_theorem1(seq, delta, &grids.x_grid)?;
    let cond2 = Cond2Report::build(grids, PI * delta, &|a, x| cond2_quantity(seq, a, x))?;
    Ok(CriterionReport {
        criterion: "theorem-2".into(),
        outcome: decide(&cond1, &cond2),
        delta,
        cond1,
        cond2,
    })
}

/// Criterion for real zero sets: `L(x) = O(ln^2|x|)` on both sides and the
/// double limsup of [`theorem3_quantity`] is finite. The growth floor for
/// condition 2 is `(4 pi - 4) Delta`, the symmetrized analogue of `pi Delta`.
pub fn check_theorem3(seq: &ZeroSequence, grids: &CriterionGrids) -> Result<CriterionReport> {
    seq.real_sorted()?;
    grids.validate()?;
    let delta = density_of(seq)?;
    let cond1 = check_theorem1(seq, delta, &grids.x_grid)?;
    let floor = (4.0 * PI - 4.0) * delta;
    let cond2 = Cond2Report::build(grids, floor, &|a, x| theorem3_quantity(seq, delta, a, x))?;
    Ok(CriterionReport {
        criterion: "theorem-3".into(),
        outcome: decide(&cond1, &cond2),
        delta,
        cond1,
        cond2,
    })
}

/// A diagnostic integral with its normalizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticValue {
    pub x: f64,
    pub value: f64,
    pub normalizer: f64,
    /// `value / normalizer`.
    pub normalized: f64,
    /// Upper cut standing in for infinity.
    pub upper: f64,
    /// Density-based estimate of the integral beyond `upper`.
    pub tail_estimate: f64,
}

/// `int_{x ln x}^T (n+(t; x) - n-(t; x)) / t dt`, with `n+(t; x)` counting
/// zeros in `(t, t + x]` and `n-(t; x)` those in `(t - x, t]`; normalized by `ln x`.
pub fn lemma3_diagnostic(seq: &ZeroSequence, x: f64, t_upper: f64) -> Result<DiagnosticValue> {
    require_even_real(seq)?;
    if !(x > 1.0 && t_upper.is_finite()) {
        return Err(crate::error::invalid("x, T", "need x > 1 and finite T"));
    }
    let lo = x * x.ln();
    let delta = density_of(seq)?;
    let mut s = NeumaierSum::new();
    if t_upper > lo {
        require_radius(seq, t_upper + x)?;
        // A zero l lies in (t, t + x] for t in [l - x, l) and in (t - x, t]
        // for t in [l, l + x).
        for (v, m) in real_zeros_in(seq, lo - x, t_upper + x)? {
            let cl = |u: f64| ln_clamp(u, lo, t_upper);
            s.add(m * ((cl(v) - cl(v - x)) - (cl(v + x) - cl(v))));
        }
    }
    let value = s.value();
    Ok(DiagnosticValue {
        x,
        value,
        normalizer: x.ln(),
        normalized: value / x.ln(),
        upper: t_upper,
        tail_estimate: delta * x * x / t_upper.max(lo),
    })
}

/// `int_{x ln x}^T (n(x, t) - n(x + iA ln x, t)) / t dt` with
/// `T = radius - |x + iA ln x|`, normalized by `A^2`.
pub fn lemma4_diagnostic(seq: &ZeroSequence, x: f64, a: f64) -> Result<DiagnosticValue> {
    require_even_real(seq)?;
    if !(x > 1.0 && a > 0.0) {
        return Err(crate::error::invalid("x, A", "need x > 1 and A > 0"));
    }
    let lo = x.abs() * x.abs().ln();
    let c = a * x.abs().ln();
    let w = Complex64::new(x, c);
    let upper = seq.radius() - w.norm();
    let delta = density_of(seq)?;
    let mut s = NeumaierSum::new();
    if upper > lo {
        for (v, m) in real_zeros_in(seq, -f64::INFINITY, f64::INFINITY)? {
            let shifted = (v - x).hypot(c);
            let direct = (v - x).abs();
            if direct.min(shifted) >= upper {
                continue;
            }
            s.add(m * (ln_clamp(shifted, lo, upper) - ln_clamp(direct, lo, upper)));
        }
    }
    let value = s.value();
    Ok(DiagnosticValue {
        x,
        value,
        normalizer: a * a,
        normalized: value / (a * a),
        upper,
        tail_estimate: 2.0 * delta * c * c / upper.max(lo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{build_sequence, SequenceSpec};

    fn integers(r: f64) -> ZeroSequence {
        build_sequence(&SequenceSpec::integers(), r).unwrap()
    }

    /// Midpoint rule in `ln t` at step `du`.
    fn riemann(lo: f64, hi: f64, du: f64, f: impl Fn(f64) -> f64) -> f64 {
        let (a, b) = (lo.ln(), hi.ln());
        let n = ((b - a) / du).ceil() as usize;
        let h = (b - a) / n as f64;
        (0..n).map(|k| f((a + (k as f64 + 0.5) * h).exp()) * h).sum()
    }

    #[test]
    fn cond2_matches_riemann_sum() {
        let seq = integers(5000.0);
        let (a, x): (f64, f64) = (3.0, 200.0);
        let c = a * x.ln();
        let w = Complex64::new(x, c);
        let snap0 = seq.counting_snapshot(Complex64::new(0.0, 0.0));
        let snapw = seq.counting_snapshot(w);
        let brute = riemann(c, x * x.ln(), 1e-3, |t| {
            snap0.count(t) as f64 - snapw.count(t) as f64
        });
        let exact = cond2_quantity(&seq, a, x).unwrap();
        assert!((brute.abs() / c - exact).abs() < 1e-2, "{brute} {exact}");
    }

    #[test]
    fn cond2_empty_range_and_bound() {
        let seq = integers(2e5);
        assert_eq!(cond2_quantity(&seq, 50.0, 20.0).unwrap(), 0.0);
        let v = cond2_quantity(&seq, 5.0, 1e4).unwrap();
        assert!(v <= PI + 0.5, "{v}");
    }

    #[test]
    fn theorem3_matches_riemann_sum() {
        let shifted = build_sequence(&SequenceSpec::IntegerLattice { offset: 0.3 }, 8000.0).unwrap();
        for seq in [integers(8000.0), shifted] {
            let (a, x, delta): (f64, f64, f64) = (4.0, 300.0, 1.0);
            let c = a * x.ln();
            let lstar = |t: f64| {
                let l = |u: f64| seq.nu(u).unwrap() as f64 - delta * u;
                l(t) - l(-t)
            };
            let brute = riemann(c, x * x.ln(), 1e-3, |t| {
                let r = (t * t - c * c).max(0.0).sqrt();
                2.0 * lstar(t) - lstar(x + r) + lstar(x - r)
            });
            let exact = theorem3_quantity(&seq, delta, a, x).unwrap();
            assert!((brute.abs() / c - exact).abs() < 1e-2, "{brute} {exact}");
        }
    }

    #[test]
    fn lemma3_matches_riemann_sum() {
        let seq = integers(1e4);
        let (x, t): (f64, f64) = (30.0, 5000.0);
        let brute = riemann(x * x.ln(), t, 1e-4, |u| {
            seq.n_plus(u, x).unwrap() as f64 - seq.n_minus(u, x).unwrap() as f64
        });
        let d = lemma3_diagnostic(&seq, x, t).unwrap();
        assert!((brute - d.value).abs() < 1e-2, "{brute} {}", d.value);
    }

    #[test]
    fn lemma4_matches_riemann_sum() {
        let seq = integers(4000.0);
        let (x, a): (f64, f64) = (50.0, 2.0);
        let d = lemma4_diagnostic(&seq, x, a).unwrap();
        let c = a * x.ln();
        let s1 = seq.counting_snapshot(Complex64::new(x, 0.0));
        let s2 = seq.counting_snapshot(Complex64::new(x, c));
        let brute = riemann(x * x.ln(), d.upper, 1e-4, |t| {
            s1.count(t) as f64 - s2.count(t) as f64
        });
        assert!((brute - d.value).abs() < 1e-2, "{brute} {}", d.value);
    }

    #[test]
    fn empty_lemma3_range() {
        let seq = integers(1e4);
        assert_eq!(lemma3_diagnostic(&seq, 1000.0, 5000.0).unwrap().value, 0.0);
    }
}
