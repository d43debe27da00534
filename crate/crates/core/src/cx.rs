//! Small complex helpers shared by the evaluators.

use num_complex::Complex64;

/// `ln |1 - z/v|`, accurate both for `|z| << |v|` and for `z` close to `v`.
#[inline]
pub fn ln_abs_one_minus(z: Complex64, v: Complex64) -> f64 {
    if v.im == 0.0 {
        let inv = 1.0 / v.re;
        let (wr, wi) = (z.re * inv, z.im * inv);
        let n2 = wr * wr + wi * wi;
        if n2 < 0.25 {
            0.5 * (n2 - 2.0 * wr).ln_1p()
        } else {
            let dr = v.re - z.re;
            0.5 * (dr * dr + z.im * z.im).ln() - v.re.abs().ln()
        }
    } else {
        let w = z / v;
        let n2 = w.norm_sqr();
        if n2 < 0.25 {
            0.5 * (n2 - 2.0 * w.re).ln_1p()
        } else {
            0.5 * ((v - z).norm_sqr().ln() - v.norm_sqr().ln())
        }
    }
}

/// Ordering key used for sequences: modulus, then argument.
#[inline]
pub fn modulus_arg_cmp(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| a.arg().total_cmp(&b.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_direct_formula() {
        let cases = [
            (Complex64::new(0.3, 0.1), Complex64::new(5.0, 0.0)),
            (Complex64::new(4.9, 0.1), Complex64::new(5.0, 0.0)),
            (Complex64::new(-2.0, 3.0), Complex64::new(1.0, 2.0)),
            (Complex64::new(1e-3, 0.0), Complex64::new(-1e4, 1.0)),
        ];
        for (z, v) in cases {
            let direct = (Complex64::new(1.0, 0.0) - z / v).norm().ln();
            assert_abs_diff_eq!(ln_abs_one_minus(z, v), direct, epsilon = 1e-14);
        }
    }

    #[test]
    fn keeps_precision_for_tiny_ratios() {
        let z = Complex64::new(1e-9, 0.0);
        let v = Complex64::new(1.0, 0.0);
        // ln(1 - 1e-9) = -1e-9 - 5e-19 - ...
        assert_abs_diff_eq!(ln_abs_one_minus(z, v), -1e-9 - 5e-19, epsilon = 1e-24);
    }
}
