//! Fast evaluation of `ln |phi(x + iy)|` for many `x` on a bounded segment.
//!
//! For `z - c` real and `|z - c| <= h`, every zero at distance at least `4h`
//! from `c` contributes
//! `ln|1 - c/lambda| - Re sum_k (z - c)^k / (k (lambda - c)^k)`,
//! so the far field collapses into one polynomial per segment after a single
//! pass over the zeros. The segment is cut into tiles that repeat the same
//! split locally; only zeros close to a tile are summed directly.

use num_complex::Complex64;

use super::{ProductEvaluator, TailPolicy, Weighted};
use crate::cx::ln_abs_one_minus;
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

const SEPARATION: f64 = 4.0;
const TERMS_NEAR: usize = 28;
const TERMS_FAR: usize = 12;
const TILE_WIDTH: f64 = 8.0;
const TAIL_DEGREE: usize = 32;

/// Moment expansion about a point on the line.
#[derive(Debug, Clone)]
struct Expansion {
    center: f64,
    /// `coef[0]` is the constant; `coef[k]` multiplies `(x - center)^k`.
    coef: Vec<f64>,
}

impl Expansion {
    fn build<'a>(center: Complex64, zeros: impl Iterator<Item = &'a Weighted>, split: f64) -> Self {
        let mut c0 = NeumaierSum::new();
        let mut near = [Complex64::new(0.0, 0.0); TERMS_NEAR + 1];
        let mut far = [Complex64::new(0.0, 0.0); TERMS_FAR + 1];
        for w in zeros {
            c0.add(w.mult * ln_abs_one_minus(center, w.value));
            let u = (w.value - center).inv();
            let mut p = u * w.mult;
            if (w.value - center).norm() >= split {
                for m in far.iter_mut().skip(1) {
                    *m += p;
                    p *= u;
                }
            } else {
                for m in near.iter_mut().skip(1) {
                    *m += p;
                    p *= u;
                }
            }
        }
        let mut coef = vec![0.0; TERMS_NEAR + 1];
        coef[0] = c0.value();
        for k in 1..=TERMS_NEAR {
            let mut m = near[k];
            if k <= TERMS_FAR {
                m += far[k];
            }
            coef[k] = -m.re / k as f64;
        }
        Expansion {
            center: center.re,
            coef,
        }
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        let t = x - self.center;
        self.coef.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// Chebyshev interpolant on `[lo, hi]`.
#[derive(Debug, Clone)]
struct Chebyshev {
    lo: f64,
    hi: f64,
    coef: Vec<f64>,
}

impl Chebyshev {
    fn fit(lo: f64, hi: f64, degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let n = degree + 1;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let vals: Vec<f64> = (0..n)
            .map(|j| {
                let th = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                f(mid + half * th.cos())
            })
            .collect();
        let coef = (0..n)
            .map(|k| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let th = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                        v * (k as f64 * th).cos()
                    })
                    .sum();
                s * 2.0 / n as f64
            })
            .collect();
        Chebyshev { lo, hi, coef }
    }

    fn eval(&self, x: f64) -> f64 {
        let span = self.hi - self.lo;
        let t = if span > 0.0 {
            (2.0 * x - self.lo - self.hi) / span
        } else {
            0.0
        };
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coef.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + 0.5 * self.coef[0]
    }
}

#[derive(Debug, Clone)]
struct Tile {
    mid: Expansion,
    near: Vec<Weighted>,
}

/// `ln |phi|` on the segment `[lo, hi] + iy`.
#[derive(Debug, Clone)]
pub struct LineWindow {
    y: f64,
    lo: f64,
    hi: f64,
    exclusion: f64,
    far: Expansion,
    tiles: Vec<Tile>,
    tile_width: f64,
    tail: Option<Chebyshev>,
}

impl LineWindow {
    pub(super) fn new(ev: &ProductEvaluator<'_>, y: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi && lo.is_finite() && hi.is_finite() && y.is_finite()) {
            return Err(crate::error::invalid("window", "need finite lo <= hi"));
        }
        let seq = ev.sequence();
        let r = seq.radius();
        if !seq.is_complete() {
            for x in [lo, hi] {
                let z = Complex64::new(x, y);
                if z.norm() > r / 2.0 {
                    return Err(Error::OutsideTailRegion {
                        z,
                        required: 2.0 * z.norm(),
                        radius: r,
                    });
                }
            }
        }
        let half = (0.5 * (hi - lo)).max(0.5);
        let center = Complex64::new(0.5 * (lo + hi), y);
        let near_radius = SEPARATION * half;
        let zeros = ev.zeros_by_re();
        let near_range = ev.re_range(center.re - near_radius, center.re + near_radius);
        let window_near: Vec<Weighted> = zeros[near_range.clone()]
            .iter()
            .copied()
            .filter(|w| (w.value - center).norm() < near_radius)
            .collect();
        let far_iter = zeros
            .iter()
            .filter(|w| (w.value - center).norm() >= near_radius);
        let far = Expansion::build(center, far_iter, 8.0 * near_radius);

        let count = (((hi - lo) / TILE_WIDTH).ceil() as usize).max(1);
        let tile_width = if hi > lo { (hi - lo) / count as f64 } else { 1.0 };
        let tile_near = SEPARATION * (0.5 * tile_width).max(0.5);
        let tiles = (0..count)
            .map(|i| {
                let t_lo = lo + i as f64 * tile_width;
                let tc = Complex64::new(t_lo + 0.5 * tile_width, y);
                let (near, mid): (Vec<Weighted>, Vec<Weighted>) = window_near
                    .iter()
                    .partition(|w| (w.value - tc).norm() < tile_near);
                Tile {
                    mid: Expansion::build(tc, mid.iter(), f64::INFINITY),
                    near,
                }
            })
            .collect();

        let tail = if seq.is_complete() || ev.policy() == TailPolicy::Truncated {
            None
        } else if seq.tail_sum(center).is_some() {
            Some(Chebyshev::fit(lo, hi, TAIL_DEGREE, |x| {
                seq.tail_sum(Complex64::new(x, y)).map_or(0.0, |t| t.value)
            }))
        } else {
            None
        };
        Ok(LineWindow {
            y,
            lo,
            hi,
            exclusion: ev.exclusion_radius(center),
            far,
            tiles,
            tile_width,
            tail,
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// `ln |phi(x + iy)|`; `-inf` at a zero.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= self.lo - 1e-9 && x <= self.hi + 1e-9);
        let i = (((x - self.lo) / self.tile_width).floor().max(0.0) as usize)
            .min(self.tiles.len() - 1);
        let tile = &self.tiles[i];
        let z = Complex64::new(x, self.y);
        let mut s = NeumaierSum::new();
        for w in &tile.near {
            if (w.value - z).norm() < self.exclusion {
                return f64::NEG_INFINITY;
            }
            s.add(w.mult * ln_abs_one_minus(z, w.value));
        }
        s.add(tile.mid.eval(x));
        s.add(self.far.eval(x));
        if let Some(t) = &self.tail {
            s.add(t.eval(x));
        }
        s.value()
    }
}

#[cfg(test)]
mod tests {
    use crate::product::{Pairing, ProductEvaluator, TailPolicy};
    use crate::seq::{build_sequence, OffsetFn, SequenceSpec};
    use num_complex::Complex64;

    fn compare(spec: SequenceSpec, radius: f64, y: f64, lo: f64, hi: f64) {
        let seq = build_sequence(&spec, radius).unwrap();
        for policy in [TailPolicy::Modeled, TailPolicy::Truncated] {
            let ev = ProductEvaluator::new(&seq, Pairing::PrincipalValue)
                .unwrap()
                .with_policy(policy);
            let w = ev.line_window(y, lo, hi).unwrap();
            for i in 0..=97 {
                let x = lo + (hi - lo) * i as f64 / 97.0;
                let direct = ev.log_abs(Complex64::new(x, y)).unwrap().value;
                let fast = w.eval(x);
                assert!(
                    (direct - fast).abs() <= 1e-9 * (1.0 + direct.abs()),
                    "x={x} y={y} direct={direct} fast={fast}"
                );
            }
        }
    }

    #[test]
    fn window_matches_direct_sum_on_lattice() {
        compare(SequenceSpec::integers(), 20_000.0, 0.0, 3000.25, 3150.75);
        compare(SequenceSpec::integers(), 20_000.0, 7.5, -40.0, 40.0);
    }

    #[test]
    fn window_matches_direct_sum_on_complex_zeros() {
        let spec = SequenceSpec::EvenClosure {
            base: Box::new(SequenceSpec::ComplexPerturbed {
                offset: OffsetFn::Ln1p,
                positive_only: true,
            }),
        };
        compare(spec, 20_000.0, -12.0, 1000.0, 1100.0);
    }

    #[test]
    fn window_reports_zeros() {
        let seq = build_sequence(&SequenceSpec::integers(), 1000.0).unwrap();
        let ev = ProductEvaluator::auto(&seq);
        let w = ev.line_window(0.0, 10.0, 20.0).unwrap();
        assert_eq!(w.eval(13.0), f64::NEG_INFINITY);
        assert!(w.eval(13.5).is_finite());
    }
}
