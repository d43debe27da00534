//! Tanh-sinh (double exponential) quadrature on `[0, 1]`.
//!
//! Nodes are stored together with their distances to both endpoints so that
//! integrands with logarithmic endpoint singularities can be evaluated without
//! cancellation in `1 - u`.

use std::f64::consts::PI;

/// One node of the rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    /// Position `u` in `[0, 1]`.
    pub left: f64,
    /// `1 - u`, computed without cancellation.
    pub right: f64,
    pub weight: f64,
}

/// A nested pair of tanh-sinh rules with steps `h` and `h/2`.
///
/// The coarse rule's nodes are the even-indexed nodes of the fine rule, so
/// both estimates come from one set of integrand evaluations.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    pub nodes: Vec<Node>,
    /// Weights of the coarse rule, aligned with `nodes` (zero on odd nodes).
    pub coarse: Vec<f64>,
}

impl TanhSinh {
    /// Rule with fine step `h` over `t in [-t_max, t_max]`.
    pub fn new(h: f64, t_max: f64) -> Self {
        let n = (t_max / h).floor() as i64;
        let mut nodes = Vec::with_capacity((2 * n + 1) as usize);
        let mut coarse = Vec::with_capacity(nodes.capacity());
        for j in -n..=n {
            let t = j as f64 * h;
            let a = PI * t.sinh();
            // u = 1/(1+e^{-a}), 1-u = 1/(1+e^{a})
            let left = 1.0 / (1.0 + (-a).exp());
            let right = 1.0 / (1.0 + a.exp());
            let dens = PI * t.cosh() * left * right;
            if dens == 0.0 || left == 0.0 || right == 0.0 {
                continue;
            }
            nodes.push(Node {
                left,
                right,
                weight: h * dens,
            });
            coarse.push(if j.rem_euclid(2) == 0 { 2.0 * h * dens } else { 0.0 });
        }
        TanhSinh { nodes, coarse }
    }

    /// Integrate `f(left, right)` over `[0, 1]`; returns the fine estimate and
    /// the difference to the coarse one.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> (f64, f64) {
        let mut fine = crate::sum::NeumaierSum::new();
        let mut coarse = crate::sum::NeumaierSum::new();
        for (node, &cw) in self.nodes.iter().zip(&self.coarse) {
            let v = f(node.left, node.right);
            fine.add(node.weight * v);
            if cw != 0.0 {
                coarse.add(cw * v);
            }
        }
        let fv = fine.value();
        (fv, (fv - coarse.value()).abs())
    }
}

impl Default for TanhSinh {
    fn default() -> Self {
        TanhSinh::new(1.0 / 16.0, 4.0)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_log_singularities() {
        let q = TanhSinh::default();
        // \int_0^1 ln u du = -1
        let (v, e) = q.integrate(|l, _| l.ln());
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-13);
        assert!(e < 1e-8);
        // \int_0^1 ln u + ln(1-u) du = -2, right end via the stored complement
        let (v, _) = q.integrate(|l, r| l.ln() + r.ln());
        assert_abs_diff_eq!(v, -2.0, epsilon = 1e-13);
        // \int_0^1 ln^2 u du = 2
        let (v, _) = q.integrate(|l, _| l.ln().powi(2));
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let r = gauss_legendre(8);
        let s: f64 = r.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert_abs_diff_eq!(s, 2.0 / 15.0, epsilon = 1e-14);
        let total: f64 = r.iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
    }
}
