//! Closed form for the product over the integers with the lacunary points
//! `+-2^k` (`k >= 1`) removed:
//!
//! `phi0(z) = sin(pi z) / (pi z) / prod_{k >= 1} (1 - z^2 / 4^k)`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::{LogModulus, LogModulusSource};
use crate::cx::ln_abs_one_minus;
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// `ln |sin(pi z)|` without overflow for large `|Im z|`.
pub(crate) fn ln_abs_sin_pi(z: Complex64) -> f64 {
    let r = z.re - z.re.round();
    let y = PI * z.im.abs();
    if y > 1.0 {
        // |sin(x + iy)|^2 = e^{2y}/4 (1 + e^{-4y} - 2 cos(2x) e^{-2y})
        let e = (-2.0 * y).exp();
        y - LN_2 + 0.5 * (e * e - 2.0 * (2.0 * PI * r).cos() * e).ln_1p()
    } else {
        let s = (PI * r).sin();
        let sh = y.sinh();
        0.5 * (s * s + sh * sh).ln()
    }
}

/// `ln |sin(pi z) / (pi z)|`, by series near the removable point.
pub(crate) fn ln_abs_sinc(z: Complex64) -> f64 {
    if z.norm() < 1e-3 {
        let w2 = (z * PI) * (z * PI);
        let f = Complex64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
        return f.norm().ln();
    }
    ln_abs_sin_pi(z) - (z * PI).norm().ln()
}

/// `sum_{k >= 1} ln |1 - z^2/4^k|` and the truncation bound.
fn lacunary_sum(z: Complex64) -> (f64, f64) {
    let zn = z.norm();
    let mut s = NeumaierSum::new();
    let mut k = 1;
    let mut p = 2.0f64;
    loop {
        let pk = Complex64::new(p, 0.0);
        s.add(ln_abs_one_minus(z, pk) + ln_abs_one_minus(z, -pk));
        // remaining terms: sum_{j > k} 2|z|^2/4^j = (2/3)|z|^2/4^k
        let rest = 2.0 / 3.0 * zn * zn / (p * p);
        if rest < 1e-18 || k >= 1000 {
            return (s.value(), rest);
        }
        k += 1;
        p *= 2.0;
    }
}

/// `ln |phi0(z)|`.
///
/// Within `exclusion` of `+-2^k` the quotient is a removable singularity
/// that the closed form cannot resolve; those points return
/// [`Error::PoleCandidate`]. Nonzero integers other than `+-2^k` are zeros.
pub fn eval_phi0_log(z: Complex64) -> Result<LogModulus> {
    Phi0::default().log_modulus(z)
}

/// [`eval_phi0_log`] as a [`LogModulusSource`] with a configurable exclusion radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi0 {
    pub exclusion: f64,
}

impl Default for Phi0 {
    fn default() -> Self {
        Phi0 { exclusion: 1e-9 }
    }
}

fn is_power_of_two(n: f64) -> bool {
    let a = n.abs();
    a >= 2.0 && a < 9.0e15 && (a as u64).is_power_of_two()
}

impl LogModulusSource for Phi0 {
    fn log_modulus(&self, z: Complex64) -> Result<LogModulus> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(crate::error::invalid("z", "must be finite"));
        }
        let n = z.re.round();
        let near_integer = (z - Complex64::new(n, 0.0)).norm() < self.exclusion;
        if near_integer && n != 0.0 {
            if is_power_of_two(n) {
                return Err(Error::PoleCandidate { z });
            }
            return Ok(LogModulus::at_zero());
        }
        let (lac, bound) = lacunary_sum(z);
        let value = ln_abs_sinc(z) - lac;
        Ok(LogModulus {
            value,
            tail_bound: bound,
            at_zero: false,
            partial_sum: value,
            tail_correction: 0.0,
        })
    }

    fn valid_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn zero_abscissae(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
        (a..=b)
            .map(|n| n as f64)
            .filter(|&n| n != 0.0 && !is_power_of_two(n))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{Pairing, ProductEvaluator};
    use crate::seq::{build_sequence, SequenceSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn sin_forms_agree() {
        for z in [
            Complex64::new(0.3, 0.2),
            Complex64::new(-7.9, 1.5),
            Complex64::new(1e6 + 0.25, -3.0),
        ] {
            let direct = (z * PI).sin().norm().ln();
            assert_abs_diff_eq!(ln_abs_sin_pi(z), direct, epsilon = 1e-9);
        }
        // no overflow far off the axis
        let far = ln_abs_sin_pi(Complex64::new(0.5, 400.0));
        assert_abs_diff_eq!(far, PI * 400.0 - LN_2, epsilon = 1e-9);
    }

    #[test]
    fn series_matches_closed_form_near_origin() {
        let z = Complex64::new(2e-3, 1e-3);
        let w = z * PI;
        assert_abs_diff_eq!(ln_abs_sinc(z), (w.sin() / w).norm().ln(), epsilon = 1e-12);
        assert_eq!(eval_phi0_log(Complex64::new(0.0, 0.0)).unwrap().value, 0.0);
    }

    #[test]
    fn zeros_and_pole_candidates() {
        assert!(eval_phi0_log(Complex64::new(3.0, 0.0)).unwrap().at_zero);
        assert!(eval_phi0_log(Complex64::new(-1.0, 0.0)).unwrap().at_zero);
        assert!(matches!(
            eval_phi0_log(Complex64::new(8.0, 0.0)),
            Err(Error::PoleCandidate { .. })
        ));
        assert!(eval_phi0_log(Complex64::new(8.5, 0.0)).is_ok());
        assert_eq!(
            Phi0::default().zero_abscissae(-5.0, 9.0),
            vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 6.0, 7.0, 9.0]
        );
    }

    #[test]
    fn matches_product_over_difference_set() {
        let spec = SequenceSpec::Difference {
            base: Box::new(SequenceSpec::integers()),
            remove: Box::new(SequenceSpec::Lacunary {
                ratio: 2.0,
                even: true,
            }),
        };
        let seq = build_sequence(&spec, 5000.0).unwrap();
        let ev = ProductEvaluator::new(&seq, Pairing::EvenForm).unwrap();
        for z in [
            Complex64::new(0.5, 0.0),
            Complex64::new(10.5, 0.0),
            Complex64::new(100.25, 3.0),
            Complex64::new(-1000.7, -20.0),
        ] {
            let a = ev.log_abs(z).unwrap().value;
            let b = eval_phi0_log(z).unwrap().value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }
}
