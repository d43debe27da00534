//! Compensated (Neumaier) summation.

use std::iter::Sum;
use std::ops::AddAssign;

/// Running sum with a Neumaier compensation term.
///
/// Unlike plain Kahan summation this also stays exact when an addend is
/// larger in magnitude than the running total, which happens constantly when
/// log-moduli of the paired factors alternate in sign.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn neumaier<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().sum::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order() {
        let n = 1_000_000;
        let fwd = neumaier((1..=n).map(|k| 1.0 / k as f64));
        let rev = neumaier((1..=n).rev().map(|k| 1.0 / k as f64));
        assert!((fwd - rev).abs() < 1e-14);
    }
}
