use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::product::{LogModulusSource, ProductEvaluator};
use crate::quad::TanhSinh;
use crate::sum::NeumaierSum;

/// Step of the fine per-cell rule; the coarse rule uses every other node.
const CELL_STEP: f64 = 0.125;
/// Nodes beyond `|k h| = 2.5` are dropped; the omitted end mass is estimated.
const CELL_SPAN: f64 = 2.5;
/// Relative distance from a cell end below which nodes are skipped.
const END_GUARD: f64 = 1e-10;
/// Blocks per side used to fit the tail constant.
const FIT_BLOCKS: usize = 32;
/// Evaluation chunk for `scan_line`.
const CHUNK: usize = 4096;

/// Poisson representation of `ln |phi(z)|` with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonValue {
    /// `pi Delta |Im z|` plus the quadrature over `[-tail_cut, tail_cut]`.
    pub value: f64,
    /// Fine/coarse difference plus the dropped end masses of each cell.
    pub quadrature_error: f64,
    /// Estimate of the integral beyond `tail_cut`, not included in `value`.
    pub tail_estimate: f64,
    /// `C` in `|ln|phi(t)|| <= C ln^2|t| ln ln|t|` fitted on `T/2 <= |t| <= T`.
    pub fitted_constant: f64,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    fine: f64,
    coarse: f64,
    f: f64,
}

/// Cached samples of `ln |phi(t)|` on `[-T, T]`, reusable for every `z`.
///
/// The axis is cut at the real zeros; each cell (split further when longer
/// than the quadrature step) gets a tanh-sinh rule, which absorbs the
/// logarithmic singularities at its ends.
#[derive(Debug, Clone)]
pub struct PoissonOracle {
    delta: f64,
    tail_cut: f64,
    samples: Vec<Sample>,
    /// `(t, mass)` of the integrand mass dropped at each cell end, before the kernel.
    ends: Vec<(f64, f64)>,
    fitted: f64,
    tolerance: Option<f64>,
}

fn cell_rule() -> Vec<(f64, f64, f64, bool)> {
    // (u, 1 - u, density, on the coarse grid)
    let n = (CELL_SPAN / CELL_STEP).round() as i64;
    (-n..=n)
        .map(|k| {
            let s = k as f64 * CELL_STEP;
            let a = PI * s.sinh();
            let u = 1.0 / (1.0 + (-a).exp());
            let v = 1.0 / (1.0 + a.exp());
            (u, v, PI * s.cosh() * u * v, k.rem_euclid(2) == 0)
        })
        .collect()
}

fn growth(t: f64) -> f64 {
    let l = t.abs().ln();
    l * l * l.ln()
}

impl PoissonOracle {
    /// Oracle for a product over an even, real sequence with known density.
    pub fn new(ev: &ProductEvaluator<'_>, tail_cut: f64, quadrature_step: f64) -> Result<Self> {
        let seq = ev.sequence();
        if !seq.is_real() {
            return Err(Error::NotRealMode);
        }
        if !seq.is_even() {
            return Err(Error::NotEven);
        }
        let delta = seq.density().ok_or_else(|| Error::DensityUnavailable {
            reason: "the Poisson representation needs the exact density".into(),
        })?;
        if !seq.is_complete() && tail_cut > seq.radius() / 2.0 {
            return Err(Error::BeyondRadius {
                t: tail_cut,
                radius: seq.radius(),
            });
        }
        Self::from_source(ev, delta, tail_cut, quadrature_step)
    }

    /// Oracle for any source of `ln |phi|` on the real axis with density `delta`.
    pub fn from_source(
        src: &dyn LogModulusSource,
        delta: f64,
        tail_cut: f64,
        quadrature_step: f64,
    ) -> Result<Self> {
        if !(quadrature_step > 0.0) {
            return Err(invalid("quadrature_step", "must be positive"));
        }
        if !(tail_cut >= 32.0 && tail_cut.is_finite()) {
            return Err(Error::TailCutTooSmall {
                tail_cut,
                reason: "the growth model ln^2 t ln ln t needs tail_cut >= 32".into(),
            });
        }
        if tail_cut > src.valid_radius() {
            return Err(Error::BeyondRadius {
                t: tail_cut,
                radius: src.valid_radius(),
            });
        }
        let mut cuts = vec![-tail_cut];
        cuts.extend(
            src.zero_abscissae(-tail_cut, tail_cut)
                .into_iter()
                .filter(|&a| a > -tail_cut && a < tail_cut),
        );
        cuts.push(tail_cut);

        let rule = cell_rule();
        let mut samples = Vec::with_capacity(cuts.len() * rule.len());
        let mut ends = Vec::new();
        let mut end_index = Vec::new();
        for w in cuts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let pieces = ((r - l) / quadrature_step).ceil().max(1.0) as usize;
            let len = (r - l) / pieces as f64;
            for i in 0..pieces {
                let a = l + i as f64 * len;
                let b = if i + 1 == pieces { r } else { a + len };
                // Nodes closer to a cell end than the guard would hit the
                // evaluator's zero exclusion; their mass joins the end estimate.
                let guard = END_GUARD * a.abs().max(b.abs()).max(1.0);
                let first = samples.len();
                let mut u_end = f64::NAN;
                for &(u, v, dens, coarse) in &rule {
                    if len * u.min(v) < guard {
                        continue;
                    }
                    if u_end.is_nan() {
                        u_end = u;
                    }
                    let t = if u < 0.5 { a + len * u } else { b - len * v };
                    samples.push(Sample {
                        t,
                        fine: len * CELL_STEP * dens,
                        coarse: if coarse { len * 2.0 * CELL_STEP * dens } else { 0.0 },
                        f: 0.0,
                    });
                }
                if samples.len() == first {
                    return Err(invalid("quadrature_step", "cells too short for the end guard"));
                }
                // mass beyond the outermost node, ~ len u0 (|f| + 1)
                end_index.push((first, len * u_end));
                end_index.push((samples.len() - 1, len * u_end));
            }
        }

        let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
        let mut values = Vec::with_capacity(ts.len());
        for chunk in ts.chunks(CHUNK) {
            values.extend(src.scan_line(0.0, chunk)?);
        }
        for (s, v) in samples.iter_mut().zip(values) {
            s.f = if v.is_nan() {
                // removable singularity of a closed form: average two neighbours
                let h = 1e-6 * s.t.abs().max(1.0);
                let lo = src.log_modulus(Complex64::new(s.t - h, 0.0))?.value;
                let hi = src.log_modulus(Complex64::new(s.t + h, 0.0))?.value;
                0.5 * (lo + hi)
            } else if v.is_finite() {
                v
            } else {
                return Err(Error::AtZero {
                    z: Complex64::new(s.t, 0.0),
                });
            };
        }
        for (i, m) in end_index {
            ends.push((samples[i].t, m * (samples[i].f.abs() + 1.0)));
        }

        let fitted = fit_constant(&samples, tail_cut);
        Ok(PoissonOracle {
            delta,
            tail_cut,
            samples,
            ends,
            fitted,
            tolerance: None,
        })
    }

    /// Reject points whose tail estimate exceeds `tol`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn tail_cut(&self) -> f64 {
        self.tail_cut
    }

    pub fn fitted_constant(&self) -> f64 {
        self.fitted
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Kernel-weighted sums over the cached samples for `y != 0`.
    fn integrals(&self, z: Complex64) -> (f64, f64, f64) {
        let (x, y) = (z.re, z.im);
        let kernel = |t: f64| y / (PI * ((x - t) * (x - t) + y * y));
        let mut fine = NeumaierSum::new();
        let mut coarse = NeumaierSum::new();
        for s in &self.samples {
            let k = kernel(s.t) * s.f;
            fine.add(s.fine * k);
            coarse.add(s.coarse * k);
        }
        let ends: f64 = self.ends.iter().map(|&(t, m)| m * kernel(t).abs()).sum();
        let (f, c) = (fine.value(), coarse.value());
        (f, (f - c).abs(), ends)
    }

    fn tail_estimate(&self, z: Complex64) -> f64 {
        thread_local! {
            static QUAD: TanhSinh = TanhSinh::default();
        }
        let (x, y) = (z.re, z.im.abs());
        let t0 = self.tail_cut;
        // t = T/u over u in (0, 1)
        let (integral, _) = QUAD.with(|q| {
            q.integrate(|u, _| {
                let t = t0 / u;
                let k = 1.0 / ((t - x) * (t - x) + y * y) + 1.0 / ((t + x) * (t + x) + y * y);
                growth(t) * k * t0 / (u * u)
            })
        });
        y / PI * self.fitted * integral
    }

    fn finish(&self, z: Complex64, value: f64, qerr: f64) -> Result<PoissonValue> {
        let tail = self.tail_estimate(z);
        if let Some(tol) = self.tolerance {
            if tail > tol {
                return Err(Error::TailCutTooSmall {
                    tail_cut: self.tail_cut,
                    reason: format!("tail estimate {tail:.3e} at {z} exceeds {tol:.3e}"),
                });
            }
        }
        Ok(PoissonValue {
            value,
            quadrature_error: qerr,
            tail_estimate: tail,
            fitted_constant: self.fitted,
        })
    }

    /// `ln |phi(z)| = pi Delta Im z + (1/pi) int Im z ln|phi(t)| / |z - t|^2 dt`, `Im z > 0`.
    pub fn log_abs(&self, z: Complex64) -> Result<PoissonValue> {
        if !(z.im > 0.0) {
            return Err(Error::NotUpperHalfPlane { z });
        }
        let (integral, diff, ends) = self.integrals(z);
        self.finish(z, PI * self.delta * z.im + integral, diff + ends)
    }

    /// Lower half-plane form
    /// `ln |phi(z)| = -pi Delta Im z - (1/pi) int Im z ln|phi(t)| / |z - t|^2 dt`, `Im z < 0`.
    pub fn log_abs_lower(&self, z: Complex64) -> Result<PoissonValue> {
        if !(z.im < 0.0) {
            return Err(invalid("z", "the lower form needs Im z < 0"));
        }
        let (integral, diff, ends) = self.integrals(z);
        self.finish(z, -PI * self.delta * z.im - integral, diff + ends)
    }

    /// [`Self::log_abs`] at many points, in parallel; output order matches input.
    pub fn log_abs_many(&self, zs: &[Complex64]) -> Vec<Result<PoissonValue>> {
        zs.par_iter().map(|&z| self.log_abs(z)).collect()
    }
}

/// Max over blocks of `mean |ln|phi||` divided by the growth model at the block centre.
fn fit_constant(samples: &[Sample], tail_cut: f64) -> f64 {
    let half = 0.5 * tail_cut;
    let mut num = [[0.0f64; FIT_BLOCKS]; 2];
    let mut den = [[0.0f64; FIT_BLOCKS]; 2];
    for s in samples {
        let a = s.t.abs();
        if a < half {
            continue;
        }
        let b = (((a - half) / half * FIT_BLOCKS as f64) as usize).min(FIT_BLOCKS - 1);
        let side = usize::from(s.t > 0.0);
        num[side][b] += s.fine * s.f.abs();
        den[side][b] += s.fine;
    }
    let mut c: f64 = 0.0;
    for side in 0..2 {
        for b in 0..FIT_BLOCKS {
            if den[side][b] > 0.0 {
                let mid = half + (b as f64 + 0.5) * half / FIT_BLOCKS as f64;
                c = c.max(num[side][b] / den[side][b] / growth(mid));
            }
        }
    }
    c
}

/// One-shot [`PoissonOracle::log_abs`].
pub fn poisson_log(
    ev: &ProductEvaluator<'_>,
    z: Complex64,
    tail_cut: f64,
    quadrature_step: f64,
) -> Result<PoissonValue> {
    PoissonOracle::new(ev, tail_cut, quadrature_step)?.log_abs(z)
}
