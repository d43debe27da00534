use num_complex::Complex64;

use super::{check_grid, AsymptoticReport};
use crate::error::{Error, Result};
use crate::seq::ZeroSequence;

/// Exact density when recorded, otherwise the estimate.
pub(crate) fn density_of(seq: &ZeroSequence) -> Result<f64> {
    match seq.density() {
        Some(d) => Ok(d),
        None => seq.density_estimate().map(|d| d.delta),
    }
}

/// `m(x, 1) / ln|x|` at the grid points (both signs) and at the densest unit
/// window of every decade.
///
/// For a complex zero set the densest discs are centred at the zeros
/// themselves, at `|Re mu|` in each decade, normalized by `ln|mu|`.
pub fn check_lemma2(seq: &ZeroSequence, x_grid: &[f64]) -> Result<AsymptoticReport> {
    check_grid("x_grid", x_grid)?;
    let xmax = *x_grid.last().unwrap();
    if xmax + 1.0 > seq.radius() {
        return Err(Error::BeyondRadius {
            t: xmax + 1.0,
            radius: seq.radius(),
        });
    }
    if !seq.is_real() {
        return Ok(lemma2_complex(seq, x_grid));
    }
    let (values, cum) = seq.real_sorted()?;
    let mut samples = Vec::new();
    for &x in x_grid {
        for s in [x, -x] {
            let m = seq.count_closed(s - 1.0, s + 1.0)? as f64;
            samples.push((s, m / s.abs().ln()));
        }
    }
    // Densest closed window [v, v + 2] starting at a zero, per decade and side.
    let xmin = x_grid[0];
    let mut lo = xmin;
    while lo < xmax {
        let hi = (lo * 10.0).min(xmax);
        for sign in [1.0, -1.0] {
            let mut best: Option<(f64, u64)> = None;
            for (i, &v) in values.iter().enumerate() {
                let c = v + 1.0;
                if !(c.abs() >= lo && c.abs() <= hi) || c.abs() <= 1.0 || c * sign < 0.0 {
                    continue;
                }
                let j = values.partition_point(|&w| w <= v + 2.0);
                let m = cum[j] - cum[i];
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((c, m));
                }
            }
            if let Some((c, m)) = best {
                samples.push((c, m as f64 / c.abs().ln()));
            }
        }
        lo = hi;
    }
    Ok(AsymptoticReport::new("m(x,1) over ln|x|", samples))
}

fn lemma2_complex(seq: &ZeroSequence, x_grid: &[f64]) -> AsymptoticReport {
    let mut pts: Vec<(Complex64, f64)> = seq
        .points()
        .iter()
        .map(|p| (p.value, p.multiplicity as f64))
        .collect();
    pts.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let disc = |c: Complex64| -> f64 {
        let i = pts.partition_point(|p| p.0.re < c.re - 1.0);
        pts[i..]
            .iter()
            .take_while(|p| p.0.re <= c.re + 1.0)
            .filter(|p| (p.0 - c).norm() <= 1.0)
            .map(|p| p.1)
            .sum()
    };
    let mut samples = Vec::new();
    for &x in x_grid {
        for s in [x, -x] {
            samples.push((s, disc(Complex64::new(s, 0.0)) / s.abs().ln()));
        }
    }
    let xmax = *x_grid.last().unwrap();
    let mut lo = x_grid[0];
    while lo < xmax {
        let hi = (lo * 10.0).min(xmax);
        for sign in [1.0, -1.0] {
            let best = pts
                .iter()
                .filter(|p| p.0.re * sign > 0.0 && (lo..=hi).contains(&p.0.re.abs()))
                .map(|p| (p.0, disc(p.0) / p.0.norm().ln()))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((c, r)) = best {
                samples.push((c.re, r));
            }
        }
        lo = hi;
    }
    AsymptoticReport::new("m(x,1) over ln|x|", samples)
}

/// `|nu(t) - Delta t| / ln^2|t|` at `+-t` for `t` in the grid.
///
/// At a zero `t` the counting function jumps; both one-sided values
/// `t -+ eps` are evaluated and the worse ratio is kept.
pub fn check_theorem1(seq: &ZeroSequence, delta: f64, t_grid: &[f64]) -> Result<AsymptoticReport> {
    check_grid("t_grid", t_grid)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::DensityUnavailable {
            reason: format!("density {delta} is not a nonnegative number"),
        });
    }
    let mut samples = Vec::with_capacity(2 * t_grid.len());
    for &t in t_grid {
        for s in [t, -t] {
            let eps = 1e-9 * s.abs().max(1.0);
            let at_zero = seq.count_closed(s, s)? > 0;
            let probes: &[f64] = if at_zero { &[s - eps, s + eps] } else { &[s] };
            let mut worst: f64 = 0.0;
            for &p in probes {
                let l = seq.nu(p)? as f64 - delta * p;
                worst = worst.max(l.abs() / p.abs().ln().powi(2));
            }
            samples.push((s, worst));
        }
    }
    Ok(AsymptoticReport::new("nu-minus-Delta-t over ln^2 t", samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{geometric_grid, Trend};
    use crate::seq::{build_sequence, SequenceSpec};

    #[test]
    fn integers_are_bounded() {
        let seq = build_sequence(&SequenceSpec::integers(), 2e5).unwrap();
        let grid = geometric_grid(1e2, 1e5, 8);
        let l2 = check_lemma2(&seq, &grid).unwrap();
        assert_eq!(l2.trend, Trend::Bounded);
        assert!(l2.sup_ratio <= 3.0 / 100f64.ln() + 1e-12);
        let t1 = check_theorem1(&seq, 1.0, &grid).unwrap();
        assert_eq!(t1.trend, Trend::Bounded);
        assert!(t1.sup_ratio <= 1.0 / 2f64.ln().powi(2));
    }

    #[test]
    fn clustered_multiplicities_grow() {
        let spec = SequenceSpec::Inflated {
            base: Box::new(SequenceSpec::integers()),
            index_base: 10,
        };
        let seq = build_sequence(&spec, 2e5).unwrap();
        let l2 = check_lemma2(&seq, &geometric_grid(1e2, 1e5, 8)).unwrap();
        assert_eq!(l2.trend, Trend::Growing);
    }

    #[test]
    fn lacunary_windows_hold_one_point() {
        let seq = build_sequence(
            &SequenceSpec::Lacunary {
                ratio: 2.0,
                even: true,
            },
            1e6,
        )
        .unwrap();
        let l2 = check_lemma2(&seq, &geometric_grid(1e2, 1e5, 4)).unwrap();
        for &(x, r) in &l2.samples {
            assert!(r * x.abs().ln() <= 1.0 + 1e-12);
        }
        assert_eq!(l2.trend, Trend::Bounded);
    }

    #[test]
    fn signed_count_at_a_zero_takes_the_worse_side() {
        let seq = build_sequence(&SequenceSpec::integers(), 1e3).unwrap();
        // nu(100 - eps) = 99, nu(100 + eps) = 100
        let r = check_theorem1(&seq, 1.0, &[100.0]).unwrap();
        let expect = 1.0 / 100f64.ln().powi(2);
        assert!((r.samples[0].1 - expect).abs() < 1e-6);
    }

    #[test]
    fn complex_discs_follow_the_zeros() {
        let base = SequenceSpec::EvenClosure {
            base: Box::new(SequenceSpec::ComplexPerturbed {
                offset: crate::seq::OffsetFn::Ln1p,
                positive_only: true,
            }),
        };
        let plain = build_sequence(&base, 2e4).unwrap();
        let l2 = check_lemma2(&plain, &geometric_grid(1e2, 1e4, 4)).unwrap();
        assert_eq!(l2.trend, Trend::Bounded);
        // neighbours j +- 1 sit at distance just over 1
        assert!(l2.sup_ratio * 100f64.ln() <= 3.0);
        let inflated = SequenceSpec::Inflated {
            base: Box::new(base),
            index_base: 10,
        };
        let seq = build_sequence(&inflated, 2e5).unwrap();
        let l2 = check_lemma2(&seq, &geometric_grid(1e2, 1e5, 4)).unwrap();
        assert_eq!(l2.trend, Trend::Growing);
    }
}
