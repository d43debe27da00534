use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seq::ZeroSequence;
use crate::sum::NeumaierSum;

/// `int_0^R (n(0, t) - n(z, t)) / t dt`.
///
/// The integrand is a step function over `t`, so each zero `a` contributes
/// `ln min(R, |a - z|) - ln min(R, |a|)` and the result carries no
/// quadrature error. For a complete sequence the materialized multiset is the
/// whole zero set and `R` may exceed the radius; otherwise `R` must not.
pub fn favorov_log(seq: &ZeroSequence, z: Complex64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(crate::error::invalid("R", "must be positive and finite"));
    }
    if !seq.is_complete() && r > seq.radius() {
        return Err(Error::BeyondRadius {
            t: r,
            radius: seq.radius(),
        });
    }
    breakpoint_sum(seq, z, r)
}

fn breakpoint_sum(seq: &ZeroSequence, z: Complex64, r: f64) -> Result<f64> {
    let eps = 1e-12 * z.norm().max(1.0);
    let mut s = NeumaierSum::new();
    for p in seq.points() {
        let a = p.value;
        let to_origin = a.norm();
        let to_z = (a - z).norm();
        if to_z < eps {
            return Err(Error::AtZero { z });
        }
        if to_origin > r && to_z > r {
            continue;
        }
        let term = to_z.min(r).ln() - to_origin.min(r).ln();
        s.add(p.multiplicity as f64 * term);
    }
    Ok(s.value())
}

/// Smallest `R` at which every materialized zero is inside both discs.
pub fn cover_all_radius(seq: &ZeroSequence, z: Complex64) -> f64 {
    seq.points()
        .iter()
        .map(|p| p.value.norm().max((p.value - z).norm()))
        .fold(1.0, f64::max)
}

/// [`favorov_log`] at [`cover_all_radius`] over the materialized multiset,
/// whether or not the sequence is complete.
pub fn favorov_log_cover_all(seq: &ZeroSequence, z: Complex64) -> Result<f64> {
    breakpoint_sum(seq, z, cover_all_radius(seq, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::ZeroPoint;
    use approx::assert_abs_diff_eq;

    fn single(v: f64) -> ZeroSequence {
        ZeroSequence::from_points(&[ZeroPoint {
            value: Complex64::new(v, 0.0),
            multiplicity: 1,
        }])
        .unwrap()
    }

    #[test]
    fn one_breakpoint() {
        let s = single(1.0);
        let v = favorov_log(&s, Complex64::new(3.0, 0.0), 10.0).unwrap();
        assert_abs_diff_eq!(v, 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn origin_gives_zero() {
        let s = single(-4.0);
        assert_eq!(favorov_log(&s, Complex64::new(0.0, 0.0), 2.0).unwrap(), 0.0);
        assert_eq!(favorov_log(&s, Complex64::new(0.0, 0.0), 20.0).unwrap(), 0.0);
    }

    #[test]
    fn truncation_at_r() {
        // zero at 1, z = 3, R = 1.5: only t in [1, 1.5] counts n(0,t) = 1
        let s = single(1.0);
        let v = favorov_log(&s, Complex64::new(3.0, 0.0), 1.5).unwrap();
        assert_abs_diff_eq!(v, 1.5f64.ln(), epsilon = 1e-15);
        assert!(matches!(
            favorov_log(&s, Complex64::new(1.0, 0.0), 5.0),
            Err(Error::AtZero { .. })
        ));
    }
}
