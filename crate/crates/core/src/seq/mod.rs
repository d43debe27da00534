//! Zero sequences, their generators and counting functions.
//!
//! Notation follows the usual conventions for zero sets of entire functions:
//! `n(z, t)` counts points (with multiplicity) in the closed disc of radius
//! `t` about `z`, and for real sequences `nu(t)` is the signed count of points
//! in `(0, t]` (or minus the count in `[t, 0)` for negative `t`). The density
//! `Delta` is normalised by `2 Delta = lim j / |lambda_j|`.

mod counting;
mod spec;
pub(crate) mod tail;

pub use counting::CountingSnapshot;
pub use spec::{OffsetFn, PointSpec, SequenceSpec};

use num_complex::Complex64;
use serde::Serialize;

use crate::cx::modulus_arg_cmp;
use crate::error::{invalid, Error, Result};
use crate::quad::TanhSinh;
use tail::{TailModel, TailSum};

/// A zero with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroPoint {
    pub value: Complex64,
    pub multiplicity: u32,
}

/// Sorted real parts with cumulative multiplicities, for O(log n) counting.
#[derive(Debug, Clone, Default)]
struct RealIndex {
    values: Vec<f64>,
    /// `cum[i]` = total multiplicity of `values[..i]`.
    cum: Vec<u64>,
}

impl RealIndex {
    fn new(points: &[ZeroPoint]) -> Self {
        let mut pairs: Vec<(f64, u32)> = points
            .iter()
            .map(|p| (p.value.re, p.multiplicity))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cum = Vec::with_capacity(pairs.len() + 1);
        cum.push(0);
        let mut acc = 0u64;
        for &(_, m) in &pairs {
            acc += m as u64;
            cum.push(acc);
        }
        RealIndex {
            values: pairs.into_iter().map(|(v, _)| v).collect(),
            cum,
        }
    }

    /// Total multiplicity of points `<= x`.
    fn at_most(&self, x: f64) -> u64 {
        self.cum[self.values.partition_point(|&v| v <= x)]
    }

    /// Total multiplicity of points `< x`.
    fn below(&self, x: f64) -> u64 {
        self.cum[self.values.partition_point(|&v| v < x)]
    }
}

/// Finite materialization of a zero set, complete up to `radius`.
#[derive(Debug, Clone)]
pub struct ZeroSequence {
    points: Vec<ZeroPoint>,
    radius: f64,
    density: Option<f64>,
    even: bool,
    m0: Option<f64>,
    real: Option<RealIndex>,
    tail: TailModel,
    spec: Option<SequenceSpec>,
}

/// Result of [`density_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEstimate {
    /// `Delta`, with `2 Delta = lim j / |lambda_j|`.
    pub delta: f64,
    /// Half the range of `j / (2 |lambda_j|)` over the sampled decade; zero when exact.
    pub spread: f64,
    pub exact: bool,
}

/// Materialize every generator point of modulus `<= radius`.
pub fn build_sequence(spec: &SequenceSpec, radius: f64) -> Result<ZeroSequence> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", format!("need a positive radius, got {radius}")));
    }
    let compiled = spec.compile()?;
    let mut acc: Vec<(Complex64, i64)> = Vec::new();
    let mut tail = TailModel::default();
    for c in &compiled.components {
        let mut s = 1u64;
        while c.modulus_floor(s as f64) <= radius {
            let v = c.value(s as f64);
            let w = c.weight * c.multiplicity(s) as i64;
            if v.norm() <= radius {
                acc.push((v, w));
            } else {
                tail.explicit.push((v, w));
            }
            s += 1;
        }
        tail.branches.push((*c, s));
    }
    for &(v, w) in &compiled.isolated {
        if v.norm() <= radius {
            acc.push((v, w));
        } else {
            tail.explicit.push((v, w));
        }
    }
    let points = merge(acc)?;
    if points.is_empty() && !compiled.components.is_empty() {
        return Err(invalid(
            "radius",
            format!("{radius} is below the smallest generator point"),
        ));
    }
    let mut seq = ZeroSequence::assemble(points, radius, compiled.density, compiled.even, tail);
    seq.spec = Some(spec.clone());
    Ok(seq)
}

fn merge(mut acc: Vec<(Complex64, i64)>) -> Result<Vec<ZeroPoint>> {
    for (v, _) in acc.iter_mut() {
        *v = Complex64::new(v.re + 0.0, v.im + 0.0);
    }
    acc.sort_by(|a, b| modulus_arg_cmp(a.0, b.0));
    let mut out: Vec<ZeroPoint> = Vec::with_capacity(acc.len());
    let mut i = 0;
    while i < acc.len() {
        let v = acc[i].0;
        let mut m = 0i64;
        while i < acc.len() && acc[i].0 == v {
            m += acc[i].1;
            i += 1;
        }
        match m {
            0 => {}
            m if m < 0 => return Err(Error::NegativeMultiplicity { value: v }),
            m => out.push(ZeroPoint {
                value: v,
                multiplicity: u32::try_from(m).map_err(|_| invalid("multiplicity", "overflow"))?,
            }),
        }
    }
    Ok(out)
}

impl ZeroSequence {
    fn assemble(
        points: Vec<ZeroPoint>,
        radius: f64,
        density: Option<f64>,
        even: bool,
        tail: TailModel,
    ) -> Self {
        let is_real = points.iter().all(|p| p.value.im == 0.0);
        let m0 = if is_real {
            None
        } else {
            Some(
                points
                    .iter()
                    .map(|p| p.value.im.abs() / p.value.norm().ln().max(1.0))
                    .fold(0.0, f64::max),
            )
        };
        let real = is_real.then(|| RealIndex::new(&points));
        ZeroSequence {
            points,
            radius,
            density,
            even,
            m0,
            real,
            tail,
            spec: None,
        }
    }

    /// A finite, complete sequence from explicit points.
    ///
    /// Coincident points are merged; the radius is the largest modulus and the
    /// density is left unknown.
    pub fn from_points(points: &[ZeroPoint]) -> Result<Self> {
        let mut acc = Vec::with_capacity(points.len());
        for p in points {
            if p.value == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroInList);
            }
            if p.multiplicity == 0 {
                return Err(invalid("multiplicity", "must be at least 1"));
            }
            acc.push((p.value, p.multiplicity as i64));
        }
        let merged = merge(acc)?;
        let radius = merged.last().map_or(1.0, |p| p.value.norm());
        let even = merged.iter().all(|p| {
            merged
                .iter()
                .any(|q| q.value == -p.value && q.multiplicity == p.multiplicity)
        });
        Ok(ZeroSequence::assemble(merged, radius, None, even, TailModel::default()))
    }

    pub fn points(&self) -> &[ZeroPoint] {
        &self.points
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Exact `Delta` from the generator, if known.
    pub fn density(&self) -> Option<f64> {
        self.density
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_real(&self) -> bool {
        self.real.is_some()
    }

    /// `M0` with `|Im mu| <= M0 max(1, ln |mu|)`, recorded for complex sequences.
    pub fn m0(&self) -> Option<f64> {
        self.m0
    }

    pub fn spec(&self) -> Option<&SequenceSpec> {
        self.spec.as_ref()
    }

    /// Total number of points counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|p| p.multiplicity as u64).sum()
    }

    /// Whether no generator point lies beyond the radius.
    pub fn is_complete(&self) -> bool {
        self.tail.is_empty()
    }

    /// Same sequence with a different density record (e.g. to force estimation).
    pub fn with_density(mut self, density: Option<f64>) -> Self {
        self.density = density;
        self
    }

    pub(crate) fn tail_sum(&self, z: Complex64) -> Option<TailSum> {
        thread_local! {
            static QUAD: TanhSinh = TanhSinh::default();
        }
        QUAD.with(|q| self.tail.eval(z, q))
    }

    fn real_index(&self) -> Result<&RealIndex> {
        self.real.as_ref().ok_or(Error::NotRealMode)
    }

    /// Sorted real values (distinct) and cumulative multiplicities.
    pub(crate) fn real_sorted(&self) -> Result<(&[f64], &[u64])> {
        let r = self.real_index()?;
        Ok((&r.values, &r.cum))
    }

    fn check_within(&self, t: f64) -> Result<()> {
        if t.abs() > self.radius {
            Err(Error::BeyondRadius {
                t,
                radius: self.radius,
            })
        } else {
            Ok(())
        }
    }

    /// Number of points in `(a, b]`, with multiplicity.
    pub fn count_half_open(&self, a: f64, b: f64) -> Result<u64> {
        self.check_within(a)?;
        self.check_within(b)?;
        let r = self.real_index()?;
        Ok(r.at_most(b).saturating_sub(r.at_most(a)))
    }

    /// Number of points in `[a, b]`, with multiplicity.
    pub fn count_closed(&self, a: f64, b: f64) -> Result<u64> {
        self.check_within(a)?;
        self.check_within(b)?;
        let r = self.real_index()?;
        Ok(r.at_most(b).saturating_sub(r.below(a)))
    }

    /// Signed count `nu(t)`.
    pub fn nu(&self, t: f64) -> Result<i64> {
        if t >= 0.0 {
            Ok(self.count_half_open(0.0, t)? as i64)
        } else {
            // The origin is never a point, so [t, 0) and [t, 0] agree.
            Ok(-(self.count_closed(t, 0.0)? as i64))
        }
    }

    /// Points in `(x, x + t]`.
    pub fn n_plus(&self, x: f64, t: f64) -> Result<u64> {
        if !(t > 0.0) {
            return Err(invalid("t", "must be positive"));
        }
        self.count_half_open(x, x + t)
    }

    /// Points in `(x - t, x]`.
    pub fn n_minus(&self, x: f64, t: f64) -> Result<u64> {
        if !(t > 0.0) {
            return Err(invalid("t", "must be positive"));
        }
        self.count_half_open(x - t, x)
    }

    /// `n(center, t)` as a step function.
    pub fn counting_snapshot(&self, center: Complex64) -> CountingSnapshot {
        CountingSnapshot::new(
            center,
            self.points
                .iter()
                .map(|p| ((p.value - center).norm(), p.multiplicity as u64)),
        )
    }

    /// Exact density when the generator knows it, otherwise the median of
    /// `j / |lambda_j|` over the last decade of materialized points, halved.
    pub fn density_estimate(&self) -> Result<DensityEstimate> {
        if let Some(d) = self.density {
            return Ok(DensityEstimate {
                delta: d,
                spread: 0.0,
                exact: true,
            });
        }
        let total = self.total_multiplicity() as usize;
        if total < 100 {
            return Err(Error::TooFewPoints {
                needed: 100,
                got: total,
            });
        }
        let cutoff = self.radius / 10.0;
        let mut j = 0u64;
        let mut ratios = Vec::new();
        for p in &self.points {
            let r = p.value.norm();
            for _ in 0..p.multiplicity {
                j += 1;
                if r > cutoff {
                    ratios.push(j as f64 / r);
                }
            }
        }
        if ratios.is_empty() {
            return Err(Error::DensityUnavailable {
                reason: "no points in the last decade below the radius".into(),
            });
        }
        ratios.sort_by(f64::total_cmp);
        let n = ratios.len();
        let median = if n % 2 == 1 {
            ratios[n / 2]
        } else {
            0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
        };
        Ok(DensityEstimate {
            delta: median / 2.0,
            spread: (ratios[n - 1] - ratios[0]) / 4.0,
            exact: false,
        })
    }

    /// Replace every point by its real part.
    ///
    /// The completeness radius shrinks to `R - M0 ln R`: any point whose real
    /// part is below that bound has modulus at most `R`. Complete sequences
    /// keep every point and their radius.
    pub fn project_real(&self) -> Result<ZeroSequence> {
        if self.is_real() {
            return Ok(self.clone());
        }
        let m0 = self.m0.ok_or(Error::NotComplexMode)?;
        if let Some(p) = self.points.iter().find(|p| p.value.re == 0.0) {
            return Err(Error::DegenerateProjection { value: p.value });
        }
        let radius = if self.is_complete() {
            self.radius
        } else {
            self.radius - m0 * self.radius.ln().max(1.0)
        };
        if !(radius > 0.0) {
            return Err(invalid("radius", "too small to project"));
        }
        let mut tail = self.tail.projected();
        let mut acc = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let a = Complex64::new(p.value.re, 0.0);
            if a.re.abs() <= radius {
                acc.push((a, p.multiplicity as i64));
            } else {
                tail.explicit.push((a, p.multiplicity as i64));
            }
        }
        let mut out = ZeroSequence::assemble(merge(acc)?, radius, self.density, self.even, tail);
        out.spec = self.spec.clone();
        Ok(out)
    }
}

/// Signed count `nu(t)` (free-function form).
pub fn nu(seq: &ZeroSequence, t: f64) -> Result<i64> {
    seq.nu(t)
}

pub fn counting_snapshot(seq: &ZeroSequence, center: Complex64) -> CountingSnapshot {
    seq.counting_snapshot(center)
}

pub fn n_plus(seq: &ZeroSequence, x: f64, t: f64) -> Result<u64> {
    seq.n_plus(x, t)
}

pub fn n_minus(seq: &ZeroSequence, x: f64, t: f64) -> Result<u64> {
    seq.n_minus(x, t)
}

pub fn density_estimate(seq: &ZeroSequence) -> Result<DensityEstimate> {
    seq.density_estimate()
}

pub fn project_real(seq: &ZeroSequence) -> Result<ZeroSequence> {
    seq.project_real()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn values(seq: &ZeroSequence) -> Vec<f64> {
        seq.points().iter().map(|p| p.value.re).collect()
    }

    #[test]
    fn integer_lattice_radius_five() {
        let s = build_sequence(&SequenceSpec::integers(), 5.0).unwrap();
        assert_eq!(
            values(&s),
            vec![1.0, -1.0, 2.0, -2.0, 3.0, -3.0, 4.0, -4.0, 5.0, -5.0]
        );
        assert_eq!(s.density(), Some(1.0));
        assert!(s.is_even());
        assert!(s.is_real());
    }

    #[test]
    fn perturbed_first_point() {
        let spec = SequenceSpec::Perturbed {
            offset: OffsetFn::Ln1pSq,
            positive_only: false,
        };
        let s = build_sequence(&spec, 3.0).unwrap();
        let first_pos = s.points().iter().find(|p| p.value.re > 0.0).unwrap();
        assert_abs_diff_eq!(first_pos.value.re, 1.0 + 2f64.ln(), epsilon = 1e-15);
        assert!(!s.is_even());
    }

    #[test]
    fn lacunary_even_radius_ten() {
        let spec = SequenceSpec::Lacunary {
            ratio: 2.0,
            even: true,
        };
        let s = build_sequence(&spec, 10.0).unwrap();
        assert_eq!(values(&s), vec![2.0, -2.0, 4.0, -4.0, 8.0, -8.0]);
        assert_eq!(s.density(), Some(0.0));
    }

    #[test]
    fn nu_examples() {
        let s = build_sequence(&SequenceSpec::integers(), 100.0).unwrap();
        assert_eq!(s.nu(3.5).unwrap(), 3);
        assert_eq!(s.nu(-2.0).unwrap(), -2);
        assert_eq!(s.nu(-2.5).unwrap(), -2);
        assert!(matches!(s.nu(101.0), Err(Error::BeyondRadius { .. })));
    }

    #[test]
    fn n_plus_minus_examples() {
        let s = build_sequence(&SequenceSpec::integers(), 100.0).unwrap();
        assert_eq!(s.n_plus(0.0, 3.5).unwrap(), 3);
        assert_eq!(s.n_plus(0.5, 1.0).unwrap(), 1);
        assert_eq!(s.n_minus(0.5, 1.0).unwrap(), 0);
        let l = build_sequence(
            &SequenceSpec::Lacunary {
                ratio: 2.0,
                even: false,
            },
            100.0,
        )
        .unwrap();
        assert_eq!(l.n_plus(0.0, 8.0).unwrap(), 3);
    }

    #[test]
    fn snapshot_examples() {
        let one = ZeroSequence::from_points(&[ZeroPoint {
            value: Complex64::new(1.0, 0.0),
            multiplicity: 1,
        }])
        .unwrap();
        assert_eq!(
            one.counting_snapshot(Complex64::new(0.0, 0.0)).breakpoints(),
            &[(1.0, 1)]
        );
        let pm = ZeroSequence::from_points(&[
            ZeroPoint {
                value: Complex64::new(1.0, 0.0),
                multiplicity: 1,
            },
            ZeroPoint {
                value: Complex64::new(-1.0, 0.0),
                multiplicity: 1,
            },
        ])
        .unwrap();
        assert_eq!(
            pm.counting_snapshot(Complex64::new(3.0, 0.0)).breakpoints(),
            &[(2.0, 1), (4.0, 1)]
        );
        let ints = build_sequence(&SequenceSpec::integers(), 100.0).unwrap();
        assert_eq!(ints.counting_snapshot(Complex64::new(50.0, 0.0)).count(10.0), 21);
    }

    #[test]
    fn density_from_generator_and_estimate() {
        let ints = build_sequence(&SequenceSpec::integers(), 1000.0).unwrap();
        let d = ints.density_estimate().unwrap();
        assert!(d.exact);
        assert_eq!(d.delta, 1.0);
        let est = ints.clone().with_density(None).density_estimate().unwrap();
        assert!(!est.exact);
        assert_abs_diff_eq!(est.delta, 1.0, epsilon = 0.01);
        let tiny = build_sequence(&SequenceSpec::integers(), 10.0)
            .unwrap()
            .with_density(None);
        assert!(matches!(
            tiny.density_estimate(),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let s = ZeroSequence::from_points(&[
            ZeroPoint {
                value: Complex64::new(1.0, 2f64.ln()),
                multiplicity: 1,
            },
            ZeroPoint {
                value: Complex64::new(-2.0, 0.0),
                multiplicity: 1,
            },
        ])
        .unwrap();
        let p = s.project_real().unwrap();
        assert!(p.is_real());
        let v: Vec<f64> = p.points().iter().map(|q| q.value.re).collect();
        assert_eq!(v, vec![1.0, -2.0]);

        let ints = build_sequence(&SequenceSpec::integers(), 10.0).unwrap();
        let same = ints.project_real().unwrap();
        assert_eq!(same.points(), ints.points());

        let bad = ZeroSequence::from_points(&[ZeroPoint {
            value: Complex64::new(0.0, 1.0),
            multiplicity: 1,
        }])
        .unwrap();
        assert!(matches!(
            bad.project_real(),
            Err(Error::DegenerateProjection { .. })
        ));
    }

    #[test]
    fn difference_removes_lacunary_points() {
        let spec = SequenceSpec::Difference {
            base: Box::new(SequenceSpec::integers()),
            remove: Box::new(SequenceSpec::Lacunary {
                ratio: 2.0,
                even: true,
            }),
        };
        let s = build_sequence(&spec, 10.0).unwrap();
        assert_eq!(
            values(&s),
            vec![1.0, -1.0, 3.0, -3.0, 5.0, -5.0, 6.0, -6.0, 7.0, -7.0, 9.0, -9.0, 10.0, -10.0]
        );
        assert!(s.is_even());
        assert_eq!(s.density(), Some(1.0));
    }

    #[test]
    fn inflated_multiplicities() {
        let spec = SequenceSpec::Inflated {
            base: Box::new(SequenceSpec::integers()),
            index_base: 10,
        };
        let s = build_sequence(&spec, 1000.0).unwrap();
        let m = |x: f64| {
            s.points()
                .iter()
                .find(|p| p.value.re == x)
                .unwrap()
                .multiplicity
        };
        assert_eq!(m(10.0), (10f64.ln().powi(2)).ceil() as u32);
        assert_eq!(m(-100.0), (100f64.ln().powi(2)).ceil() as u32);
        assert_eq!(m(11.0), 1);
    }

    #[test]
    fn complex_sequence_records_m0() {
        let spec = SequenceSpec::EvenClosure {
            base: Box::new(SequenceSpec::ComplexPerturbed {
                offset: OffsetFn::Ln1p,
                positive_only: true,
            }),
        };
        let s = build_sequence(&spec, 1000.0).unwrap();
        assert!(!s.is_real());
        assert!(s.is_even());
        let m0 = s.m0().unwrap();
        for p in s.points() {
            assert!(p.value.im.abs() <= m0 * p.value.norm().ln().max(1.0) + 1e-12);
        }
        let proj = s.project_real().unwrap();
        assert!(proj.radius() < 1000.0);
        for k in 1..=900 {
            assert_eq!(proj.count_closed(k as f64, k as f64).unwrap(), 1);
        }
    }
}
