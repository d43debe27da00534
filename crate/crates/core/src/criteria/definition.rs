use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{Failure, Outcome, SlowDecreaseParams, Verdict, GROWTH_RATIO};
use crate::error::{Error, Result};
use crate::product::LogModulusSource;

/// Best achievable deficit at one probe for one `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeDeficit {
    pub a: f64,
    pub x: f64,
    /// `max_x' ln|phi(x')| + a ln(a + |x'|)`; `-inf` when no window point exists.
    pub deficit: f64,
    /// Where the maximum was attained (real part).
    pub best_x: f64,
    /// `max_x' ln|phi(x')|` over the same window.
    pub best_log_modulus: f64,
}

/// Scan the windows of one probe on the lines `Im z = y` for every `a`.
fn scan_probe(
    src: &dyn LogModulusSource,
    x: f64,
    lines: &[f64],
    params: &SlowDecreaseParams,
) -> Result<Vec<ProbeDeficit>> {
    let width = |a: f64| a * (a + x.abs()).ln();
    let amax = *params.a_grid.last().unwrap();
    let mut out: Vec<ProbeDeficit> = params
        .a_grid
        .iter()
        .map(|&a| ProbeDeficit {
            a,
            x,
            deficit: f64::NEG_INFINITY,
            best_x: f64::NAN,
            best_log_modulus: f64::NEG_INFINITY,
        })
        .collect();
    for &y in lines {
        let wmax = width(amax);
        if wmax < y.abs() {
            continue;
        }
        let half = (wmax * wmax - y * y).sqrt();
        let (lo, hi) = (x - half, x + half);
        let reach = Complex64::new(lo.abs().max(hi.abs()), y).norm();
        if reach > src.valid_radius() {
            return Err(Error::OutsideTailRegion {
                z: Complex64::new(if hi.abs() > lo.abs() { hi } else { lo }, y),
                required: 2.0 * reach,
                radius: 2.0 * src.valid_radius(),
            });
        }
        let n = ((hi - lo) * params.window_resolution).ceil().max(1.0) as usize;
        let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let zeros = src.zero_abscissae(lo, hi);
        xs.extend(zeros.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let vals = src.scan_line(y, &xs)?;
        for d in out.iter_mut() {
            let w = width(d.a);
            if w < y.abs() {
                continue;
            }
            let h = (w * w - y * y).sqrt();
            let (a_lo, a_hi) = (x - h, x + h);
            for (&xp, &v) in xs.iter().zip(&vals) {
                if xp < a_lo || xp > a_hi || v.is_nan() {
                    continue;
                }
                let s = v + d.a * (d.a + Complex64::new(xp, y).norm()).ln();
                if s > d.deficit {
                    d.deficit = s;
                    d.best_x = xp;
                }
                d.best_log_modulus = d.best_log_modulus.max(v);
            }
        }
    }
    Ok(out)
}

fn run(
    src: &dyn LogModulusSource,
    params: &SlowDecreaseParams,
    lines: &(dyn Fn(f64) -> Vec<f64> + Sync),
) -> Result<Verdict> {
    params.validate()?;
    let probes: Vec<f64> = params.x_grid.iter().flat_map(|&x| [x, -x]).collect();
    let rows: Vec<Vec<ProbeDeficit>> = probes
        .par_iter()
        .map(|&x| scan_probe(src, x, &lines(x), params))
        .collect::<Result<_>>()?;
    let deficits: Vec<ProbeDeficit> = rows.into_iter().flatten().collect();

    let witness_a = params
        .a_grid
        .iter()
        .copied()
        .find(|&a| deficits.iter().filter(|d| d.a == a).all(|d| d.deficit >= 0.0));

    let amax = *params.a_grid.last().unwrap();
    let last_a: Vec<&ProbeDeficit> = deficits.iter().filter(|d| d.a == amax).collect();
    let failures: Vec<Failure> = last_a
        .iter()
        .filter(|d| d.deficit < 0.0)
        .map(|d| Failure {
            x: d.x,
            best_log_modulus: d.best_log_modulus,
            required: -amax * (amax + d.x.abs()).ln(),
        })
        .collect();

    let outcome = if witness_a.is_some() {
        Outcome::SlowlyDecreasing
    } else {
        let xmin = params.x_grid[0];
        let xmax = *params.x_grid.last().unwrap();
        let min_over = |keep: &dyn Fn(f64) -> bool| {
            last_a
                .iter()
                .filter(|d| keep(d.x.abs()))
                .map(|d| d.deficit)
                .fold(f64::INFINITY, f64::min)
        };
        let first = min_over(&|t| t <= 10.0 * xmin);
        let last = min_over(&|t| t >= xmax / 10.0);
        // Failing at the end of the grid and getting worse across decades.
        let worsening = first >= 0.0 || last.abs() >= GROWTH_RATIO * first.abs();
        if xmax >= 10.0 * xmin && last < 0.0 && worsening {
            Outcome::NotSlowlyDecreasing
        } else {
            Outcome::Inconclusive
        }
    };
    Ok(Verdict {
        outcome,
        witness_a,
        failures,
        grids: params.clone(),
        deficits,
    })
}

/// Definitional check on the real axis.
///
/// For each probe `+-x` and each `a`, the window `|x' - x| <= a ln(a + |x|)`
/// is sampled at `window_resolution` points per unit plus the midpoints
/// between consecutive zeros, and the best deficit
/// `ln|phi(x')| + a ln(a + |x'|)` is recorded. The outcome is
/// slowly-decreasing when one grid `a` has a nonnegative deficit at every
/// probe; not-slowly-decreasing when the largest `a` fails in the last
/// decade and the failure worsens relative to the first decade; otherwise
/// inconclusive.
pub fn check_slow_decrease_def(
    src: &dyn LogModulusSource,
    params: &SlowDecreaseParams,
) -> Result<Verdict> {
    run(src, params, &|_| vec![0.0])
}

/// Definitional check on the lines `Im z = +-slope ln|x|`.
///
/// A window point `x' + iy` must lie within `a ln(a + |x|)` of the probe,
/// so each line contributes the chord `|x' - x| <= sqrt(w^2 - y^2)`; the
/// threshold is `-a ln(a + |x' + iy|)`. The better of the two lines counts.
pub fn check_slow_decrease_off_axis(
    src: &dyn LogModulusSource,
    params: &SlowDecreaseParams,
    slope: f64,
) -> Result<Verdict> {
    run(src, params, &|x: f64| {
        let y = slope * x.abs().ln();
        if y == 0.0 {
            vec![0.0]
        } else {
            vec![y, -y]
        }
    })
}
