//! Contribution of the unmaterialized zeros to `ln |prod (1 - z/lambda)|`.
//!
//! Smooth branches (lattice and perturbed shapes) are summed with the
//! midpoint Euler-Maclaurin formula in the index variable; their integrals
//! only converge when the branches pair up (`sum weight * orientation = 0`),
//! which mirrors the principal-value limit. Sparse branches (lacunary,
//! `exp(sqrt j)`, inflated multiplicities) are summed term by term until the
//! remainder is below `1e-18`.

use num_complex::Complex64;

use crate::cx::ln_abs_one_minus;
use crate::quad::TanhSinh;
use crate::seq::spec::{Component, Shape};
use crate::sum::NeumaierSum;

/// Tail sum and a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TailSum {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct TailModel {
    /// Branches with the first index that was not enumerated.
    pub branches: Vec<(Component, u64)>,
    /// Enumerated points lying beyond the materialization radius.
    pub explicit: Vec<(Complex64, i64)>,
}

const NEGLIGIBLE: f64 = 1e-18;

impl TailModel {
    pub fn is_empty(&self) -> bool {
        self.branches.is_empty() && self.explicit.is_empty()
    }

    /// Whether the smooth branches pair up so that their integral converges.
    pub fn is_supported(&self) -> bool {
        let net: i64 = self
            .branches
            .iter()
            .filter(|(c, _)| c.shape.is_smooth())
            .map(|(c, _)| c.weight * c.orientation() as i64)
            .sum();
        net == 0
    }

    pub fn projected(&self) -> TailModel {
        TailModel {
            branches: self
                .branches
                .iter()
                .map(|&(c, s)| (Component { project: true, ..c }, s))
                .collect(),
            explicit: self
                .explicit
                .iter()
                .map(|&(v, w)| (Complex64::new(v.re, 0.0), w))
                .collect(),
        }
    }

    /// Sum of `m ln|1 - z/lambda|` over all tail points.
    pub fn eval(&self, z: Complex64, quad: &TanhSinh) -> Option<TailSum> {
        if !self.is_supported() {
            return None;
        }
        let mut total = NeumaierSum::new();
        let mut error = 0.0;
        for &(v, w) in &self.explicit {
            total.add(w as f64 * ln_abs_one_minus(z, v));
        }
        if z == Complex64::new(0.0, 0.0) {
            return Some(TailSum {
                value: 0.0,
                error: 0.0,
            });
        }
        let smooth: Vec<(Component, u64)> = self
            .branches
            .iter()
            .copied()
            .filter(|(c, _)| c.shape.is_smooth())
            .collect();
        if !smooth.is_empty() {
            let (v, e) = smooth_tail(&smooth, z, quad);
            total.add(v);
            error += e;
            for &(c, start) in &smooth {
                if let Some(b) = c.inflate {
                    let (v, e) = inflation_extras(&c, b, start, z);
                    total.add(v);
                    error += e;
                }
            }
        }
        for &(c, start) in self.branches.iter().filter(|(c, _)| !c.shape.is_smooth()) {
            let (v, e) = sparse_tail(&c, start, z);
            total.add(v);
            error += e;
        }
        Some(TailSum {
            value: total.value(),
            error,
        })
    }
}

fn smooth_tail(branches: &[(Component, u64)], z: Complex64, quad: &TanhSinh) -> (f64, f64) {
    let start = branches.iter().map(|&(_, s)| s).max().unwrap_or(1);
    let mut total = NeumaierSum::new();
    // Align every branch to the common start index.
    for &(c, s0) in branches {
        for s in s0..start {
            total.add(c.weight as f64 * ln_abs_one_minus(z, c.value(s as f64)));
        }
    }
    let h = |s: f64| -> f64 {
        branches
            .iter()
            .map(|(c, _)| c.weight as f64 * ln_abs_one_minus(z, c.value(s)))
            .sum()
    };
    // sum_{s >= S} H(s) = int_{S-1/2}^inf H + H'(a)/24 - 7 H'''(a)/5760 + ...
    let a = start as f64 - 0.5;
    let (integral, qerr) = quad.integrate(|u, _| {
        let s = a / u;
        h(s) * a / (u * u)
    });
    let d = 0.25;
    let (hm3, hm1, hp1, hp3) = (h(a - 1.5 * d), h(a - 0.5 * d), h(a + 0.5 * d), h(a + 1.5 * d));
    let d1 = (27.0 * (hp1 - hm1) - (hp3 - hm3)) / (24.0 * d);
    let d3 = (hp3 - 3.0 * hp1 + 3.0 * hm1 - hm3) / (d * d * d);
    let first = d1 / 24.0;
    let second = -7.0 * d3 / 5760.0;
    total.add(integral);
    total.add(first);
    total.add(second);
    let err = qerr + second.abs() + 1e-15 * (integral.abs() + first.abs());
    (total.value(), err)
}

fn inflation_extras(c: &Component, b: u64, start: u64, z: Complex64) -> (f64, f64) {
    let mut total = NeumaierSum::new();
    let mut p = b;
    while p < start {
        match p.checked_mul(b) {
            Some(n) => p = n,
            None => return (0.0, 0.0),
        }
    }
    let zn = z.norm();
    loop {
        let extra = c.multiplicity(p) as f64 - 1.0;
        let v = c.value(p as f64);
        let ratio = zn / v.norm();
        if extra > 0.0 {
            total.add(c.weight as f64 * extra * ln_abs_one_minus(z, v));
        }
        match p.checked_mul(b) {
            Some(n) if (extra + 1.0) * ratio > NEGLIGIBLE => p = n,
            _ => {
                let rest = 2.0 * (extra + 2.0) * ratio * b as f64 / (b as f64 - 1.0);
                return (total.value(), rest.min(1.0));
            }
        }
    }
}

fn sparse_tail(c: &Component, start: u64, z: Complex64) -> (f64, f64) {
    let mut total = NeumaierSum::new();
    let zn = z.norm();
    let w = c.weight as f64;
    let mut s = start;
    loop {
        let v = c.value(s as f64);
        let m = c.multiplicity(s) as f64;
        total.add(w * m * ln_abs_one_minus(z, v));
        // Bound on everything after index s.
        let rest = match c.shape {
            Shape::Lacunary { q } => 2.0 * (m + 1.0) * zn / v.norm() / (q - 1.0),
            Shape::ExpSqrt => {
                let r = (s as f64).sqrt();
                4.0 * zn * (r + 1.0) * (-r).exp()
            }
            _ => unreachable!("smooth shapes are integrated"),
        };
        if rest < NEGLIGIBLE || s == u64::MAX {
            return (total.value(), rest * w.abs());
        }
        s += 1;
    }
}
