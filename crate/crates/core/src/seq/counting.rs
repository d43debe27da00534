use num_complex::Complex64;
use serde::Serialize;

use crate::sum::NeumaierSum;

/// `t -> n(center, t)` as a right-continuous step function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingSnapshot {
    center: Complex64,
    /// Strictly increasing radii with positive jumps.
    breakpoints: Vec<(f64, u64)>,
    /// `cum[i]` = sum of jumps of `breakpoints[..i]`.
    #[serde(skip)]
    cum: Vec<u64>,
}

impl CountingSnapshot {
    pub(crate) fn new(center: Complex64, distances: impl Iterator<Item = (f64, u64)>) -> Self {
        let mut d: Vec<(f64, u64)> = distances.collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints: Vec<(f64, u64)> = Vec::with_capacity(d.len());
        for (r, m) in d {
            match breakpoints.last_mut() {
                Some(last) if last.0 == r => last.1 += m,
                _ => breakpoints.push((r, m)),
            }
        }
        let mut cum = Vec::with_capacity(breakpoints.len() + 1);
        cum.push(0);
        let mut acc = 0;
        for &(_, m) in &breakpoints {
            acc += m;
            cum.push(acc);
        }
        CountingSnapshot {
            center,
            breakpoints,
            cum,
        }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn breakpoints(&self) -> &[(f64, u64)] {
        &self.breakpoints
    }

    /// `n(center, t)`: sum of jumps at radii `<= t`.
    pub fn count(&self, t: f64) -> u64 {
        self.cum[self.breakpoints.partition_point(|&(r, _)| r <= t)]
    }

    /// `sum_j m_j ln(clamp(r_j, lo, hi))`, the building block of every
    /// integral of `n(center, t)/t`.
    pub fn clamped_log_sum(&self, lo: f64, hi: f64) -> f64 {
        let (llo, lhi) = (lo.ln(), hi.ln());
        let i = self.breakpoints.partition_point(|&(r, _)| r <= lo);
        let j = self.breakpoints.partition_point(|&(r, _)| r < hi);
        let mut s = NeumaierSum::new();
        s.add(self.cum[i] as f64 * llo);
        for &(r, m) in &self.breakpoints[i..j] {
            s.add(m as f64 * r.ln());
        }
        s.add((self.cum[self.breakpoints.len()] - self.cum[j]) as f64 * lhi);
        s.value()
    }

    /// `int_lo^hi n(center, t) / t dt`, exactly.
    pub fn integral_over_t(&self, lo: f64, hi: f64) -> f64 {
        if !(hi > lo) {
            return 0.0;
        }
        let total = self.cum[self.breakpoints.len()] as f64;
        total * hi.ln() - self.clamped_log_sum(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn merges_equal_radii() {
        let s = CountingSnapshot::new(
            Complex64::new(0.0, 0.0),
            [(2.0, 1), (1.0, 2), (2.0, 3)].into_iter(),
        );
        assert_eq!(s.breakpoints(), &[(1.0, 2), (2.0, 4)]);
        assert_eq!(s.count(0.5), 0);
        assert_eq!(s.count(1.0), 2);
        assert_eq!(s.count(1.5), 2);
        assert_eq!(s.count(2.0), 6);
    }

    #[test]
    fn integral_against_riemann_sum() {
        let s = CountingSnapshot::new(
            Complex64::new(0.0, 0.0),
            [(0.3, 1), (1.7, 2), (2.2, 1), (5.0, 4)].into_iter(),
        );
        let (lo, hi) = (0.5, 4.0);
        let n = 400_000;
        let h = (hi - lo) / n as f64;
        let riemann: f64 = (0..n)
            .map(|k| {
                let t = lo + (k as f64 + 0.5) * h;
                s.count(t) as f64 / t * h
            })
            .sum();
        assert_abs_diff_eq!(s.integral_over_t(lo, hi), riemann, epsilon = 1e-5);
        assert_eq!(s.integral_over_t(4.0, 4.0), 0.0);
    }
}
