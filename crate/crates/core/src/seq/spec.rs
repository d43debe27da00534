//! Generator descriptions for zero sequences.
//!
//! A [`SequenceSpec`] is compiled into a flat list of indexed [`Component`]s
//! plus a list of isolated points. Materialization and the tail model both
//! work on that flat form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Slowly varying offset `l(t)` used by the perturbed generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetFn {
    /// `ln(1 + t^2)`
    Ln1pSq,
    /// `ln^2 t`
    LnSq,
    /// `ln(1 + t)`
    Ln1p,
}

impl OffsetFn {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            OffsetFn::Ln1pSq => (t * t).ln_1p(),
            OffsetFn::LnSq => {
                let l = t.ln();
                l * l
            }
            OffsetFn::Ln1p => t.ln_1p(),
        }
    }

    /// Whether `l(t) = O(ln t)`, the growth allowed for imaginary parts.
    pub fn is_logarithmic(self) -> bool {
        !matches!(self, OffsetFn::LnSq)
    }
}

/// One explicitly listed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

/// Description of a zero set.
///
/// Indexed generators enumerate `s = 1, 2, ...`; "positive only" variants
/// keep the `+s` branch, otherwise both `+s` and `-s` branches are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceSpec {
    /// Finite list of points.
    ExplicitList { points: Vec<PointSpec> },
    /// `{ j + offset : j in Z }` without the origin.
    IntegerLattice {
        #[serde(default)]
        offset: f64,
    },
    /// `{ j + l(|j|) : j = +-1, +-2, ... }`.
    Perturbed {
        offset: OffsetFn,
        #[serde(default)]
        positive_only: bool,
    },
    /// `{ j + i l(|j|) : j = +-1, +-2, ... }`.
    ComplexPerturbed {
        offset: OffsetFn,
        #[serde(default)]
        positive_only: bool,
    },
    /// `{ ratio^k : k >= 1 }`, mirrored when `even`.
    Lacunary {
        ratio: f64,
        #[serde(default)]
        even: bool,
    },
    /// `{ exp(sqrt j) : j >= 1 }`.
    ExpSqrt,
    /// Multiset sum of the parts.
    Union { parts: Vec<SequenceSpec> },
    /// Multiset sum of the base and its negation, the zero set of `f(z) f(-z)`.
    EvenClosure { base: Box<SequenceSpec> },
    /// Multiset difference; every removed point must be present in the base.
    Difference {
        base: Box<SequenceSpec>,
        remove: Box<SequenceSpec>,
    },
    /// The point with index `s = index_base^k` (k >= 1) of every indexed
    /// branch gets multiplicity `ceil(ln^2 s)`.
    Inflated {
        base: Box<SequenceSpec>,
        index_base: u64,
    },
}

/// Shape of an indexed branch, before sign and negation are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    /// `dir * s + offset`
    Lattice { offset: f64 },
    /// `dir * s + l(s)`
    Perturbed { f: OffsetFn },
    /// `dir * s + i l(s)`
    ComplexPerturbed { f: OffsetFn },
    /// `dir * q^s`
    Lacunary { q: f64 },
    /// `dir * exp(sqrt s)`
    ExpSqrt,
}

impl Shape {
    /// Smooth in the index, so the tail is an Euler-Maclaurin integral.
    pub(crate) fn is_smooth(self) -> bool {
        matches!(
            self,
            Shape::Lattice { .. } | Shape::Perturbed { .. } | Shape::ComplexPerturbed { .. }
        )
    }
}

/// An indexed branch `s -> value(s)`, `s = 1, 2, ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Component {
    pub shape: Shape,
    /// `+1` or `-1`, direction of growth before negation.
    pub dir: f64,
    pub negate: bool,
    pub project: bool,
    /// Signed multiplicity weight, negative for removed branches.
    pub weight: i64,
    pub inflate: Option<u64>,
}

impl Component {
    fn new(shape: Shape, dir: f64) -> Self {
        Component {
            shape,
            dir,
            negate: false,
            project: false,
            weight: 1,
            inflate: None,
        }
    }

    /// Value at a real index `s`; the smooth shapes accept fractional `s`.
    pub(crate) fn value(&self, s: f64) -> Complex64 {
        let d = self.dir;
        let v = match self.shape {
            Shape::Lattice { offset } => Complex64::new(d * s + offset, 0.0),
            Shape::Perturbed { f } => Complex64::new(d * s + f.eval(s), 0.0),
            Shape::ComplexPerturbed { f } => Complex64::new(d * s, f.eval(s)),
            Shape::Lacunary { q } => {
                // Integer powers stay exact for q = 2, matching lattice points.
                let p = if s.fract() == 0.0 && s < 1024.0 { q.powi(s as i32) } else { q.powf(s) };
                Complex64::new(d * p, 0.0)
            }
            Shape::ExpSqrt => Complex64::new(d * s.sqrt().exp(), 0.0),
        };
        let v = if self.negate { -v } else { v };
        // `+ 0.0` turns a signed zero into `+0` so equal points sort together.
        if self.project {
            Complex64::new(v.re + 0.0, 0.0)
        } else {
            Complex64::new(v.re + 0.0, v.im + 0.0)
        }
    }

    /// Nondecreasing lower bound of `|value(t)|` over `t >= s`.
    pub(crate) fn modulus_floor(&self, s: f64) -> f64 {
        match self.shape {
            Shape::Lattice { offset } => s - offset.abs(),
            Shape::Perturbed { f } => s - f.eval(s),
            // Projection keeps the real part `dir * s`.
            Shape::ComplexPerturbed { .. } => s,
            Shape::Lacunary { q } => q.powf(s),
            Shape::ExpSqrt => s.sqrt().exp(),
        }
    }

    /// Effective direction of the leading term after negation.
    pub(crate) fn orientation(&self) -> f64 {
        if self.negate {
            -self.dir
        } else {
            self.dir
        }
    }

    /// Multiplicity of index `s` (before the weight is applied).
    pub(crate) fn multiplicity(&self, s: u64) -> u64 {
        match self.inflate {
            Some(b) if is_power_of(s, b) => {
                let l = (s as f64).ln();
                ((l * l).ceil() as u64).max(1)
            }
            _ => 1,
        }
    }
}

pub(crate) fn is_power_of(s: u64, b: u64) -> bool {
    if s < b {
        return false;
    }
    let mut p = b;
    loop {
        if p == s {
            return true;
        }
        match p.checked_mul(b) {
            Some(n) if n <= s => p = n,
            _ => return false,
        }
    }
}

/// Flat form of a spec.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Compiled {
    pub components: Vec<Component>,
    /// Isolated points with signed weights.
    pub isolated: Vec<(Complex64, i64)>,
    /// Exact `Delta` (with `2 Delta = lim j/|lambda_j|`), when known.
    pub density: Option<f64>,
    pub even: bool,
}

impl SequenceSpec {
    /// The even integer lattice `Z \ {0}`.
    pub fn integers() -> Self {
        SequenceSpec::IntegerLattice { offset: 0.0 }
    }

    pub(crate) fn compile(&self) -> Result<Compiled> {
        match self {
            SequenceSpec::ExplicitList { points } => {
                let mut isolated = Vec::with_capacity(points.len());
                for p in points {
                    if !p.re.is_finite() || !p.im.is_finite() {
                        return Err(invalid("points", "non-finite coordinate"));
                    }
                    if p.re == 0.0 && p.im == 0.0 {
                        return Err(crate::Error::ZeroInList);
                    }
                    if p.multiplicity == 0 {
                        return Err(invalid("multiplicity", "must be at least 1"));
                    }
                    isolated.push((Complex64::new(p.re, p.im), p.multiplicity as i64));
                }
                let even = is_symmetric(&isolated);
                Ok(Compiled {
                    components: vec![],
                    isolated,
                    density: None,
                    even,
                })
            }
            SequenceSpec::IntegerLattice { offset } => {
                if !(offset.is_finite() && offset.abs() < 1.0) {
                    return Err(invalid("offset", format!("need |offset| < 1, got {offset}")));
                }
                let shape = Shape::Lattice { offset: *offset };
                let mut isolated = vec![];
                if *offset != 0.0 {
                    isolated.push((Complex64::new(*offset, 0.0), 1));
                }
                Ok(Compiled {
                    components: vec![Component::new(shape, 1.0), Component::new(shape, -1.0)],
                    isolated,
                    density: Some(1.0),
                    even: offset.abs() == 0.0 || offset.abs() == 0.5,
                })
            }
            SequenceSpec::Perturbed {
                offset,
                positive_only,
            } => {
                let shape = Shape::Perturbed { f: *offset };
                Ok(branches(shape, *positive_only, false))
            }
            SequenceSpec::ComplexPerturbed {
                offset,
                positive_only,
            } => {
                if !offset.is_logarithmic() {
                    return Err(invalid(
                        "offset",
                        "imaginary parts must be O(ln |mu|); ln_sq is not allowed here",
                    ));
                }
                let shape = Shape::ComplexPerturbed { f: *offset };
                Ok(branches(shape, *positive_only, false))
            }
            SequenceSpec::Lacunary { ratio, even } => {
                if !(ratio.is_finite() && *ratio > 1.0) {
                    return Err(invalid("ratio", format!("need q > 1, got {ratio}")));
                }
                let shape = Shape::Lacunary { q: *ratio };
                let mut c = branches(shape, !*even, *even);
                c.density = Some(0.0);
                Ok(c)
            }
            SequenceSpec::ExpSqrt => {
                let mut c = branches(Shape::ExpSqrt, true, false);
                c.density = Some(0.0);
                Ok(c)
            }
            SequenceSpec::Union { parts } => {
                if parts.is_empty() {
                    return Err(invalid("parts", "union needs at least one part"));
                }
                let mut out = Compiled {
                    density: Some(0.0),
                    even: true,
                    ..Default::default()
                };
                for p in parts {
                    let c = p.compile()?;
                    out.components.extend(c.components);
                    out.isolated.extend(c.isolated);
                    out.density = match (out.density, c.density) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                    out.even &= c.even;
                }
                Ok(out)
            }
            SequenceSpec::EvenClosure { base } => {
                let c = base.compile()?;
                let mut components = c.components.clone();
                components.extend(c.components.iter().map(|k| Component {
                    negate: !k.negate,
                    ..*k
                }));
                let mut isolated = c.isolated.clone();
                isolated.extend(c.isolated.iter().map(|&(v, w)| (-v, w)));
                Ok(Compiled {
                    components,
                    isolated,
                    density: c.density.map(|d| 2.0 * d),
                    even: true,
                })
            }
            SequenceSpec::Difference { base, remove } => {
                let b = base.compile()?;
                let r = remove.compile()?;
                let mut components = b.components;
                components.extend(r.components.into_iter().map(|k| Component {
                    weight: -k.weight,
                    ..k
                }));
                let mut isolated = b.isolated;
                isolated.extend(r.isolated.into_iter().map(|(v, w)| (v, -w)));
                Ok(Compiled {
                    components,
                    isolated,
                    density: match (b.density, r.density) {
                        (Some(a), Some(c)) => Some(a - c),
                        _ => None,
                    },
                    even: b.even && r.even,
                })
            }
            SequenceSpec::Inflated { base, index_base } => {
                if *index_base < 2 {
                    return Err(invalid("index_base", "must be at least 2"));
                }
                let mut c = base.compile()?;
                for k in &mut c.components {
                    if k.weight > 0 {
                        k.inflate = Some(*index_base);
                    }
                }
                Ok(c)
            }
        }
    }
}

fn branches(shape: Shape, positive_only: bool, mirrored: bool) -> Compiled {
    let mut components = vec![Component::new(shape, 1.0)];
    if mirrored {
        components.push(Component {
            negate: true,
            ..Component::new(shape, 1.0)
        });
    } else if !positive_only {
        components.push(Component::new(shape, -1.0));
    }
    let density = match shape {
        Shape::Lacunary { .. } | Shape::ExpSqrt => 0.0,
        _ if positive_only => 0.5,
        _ => 1.0,
    };
    Compiled {
        components,
        isolated: vec![],
        density: Some(density),
        even: mirrored,
    }
}

fn is_symmetric(points: &[(Complex64, i64)]) -> bool {
    let key = |v: Complex64| (v.re.to_bits(), v.im.to_bits());
    let mut counts = std::collections::BTreeMap::new();
    for &(v, w) in points {
        *counts.entry(key(v)).or_insert(0i64) += w;
    }
    points.iter().all(|&(v, _)| {
        let m = counts.get(&key(v)).copied().unwrap_or(0);
        let n = counts.get(&key(-v)).copied().unwrap_or(0);
        m == n
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_detection() {
        assert!(is_power_of(8, 2));
        assert!(is_power_of(1000, 10));
        assert!(!is_power_of(1, 2));
        assert!(!is_power_of(12, 2));
        assert!(!is_power_of(u64::MAX, 2));
    }

    #[test]
    fn spec_round_trips_through_serde_shape() {
        let s = SequenceSpec::Union {
            parts: vec![
                SequenceSpec::EvenClosure {
                    base: Box::new(SequenceSpec::Perturbed {
                        offset: OffsetFn::LnSq,
                        positive_only: true,
                    }),
                },
                SequenceSpec::EvenClosure {
                    base: Box::new(SequenceSpec::ExpSqrt),
                },
            ],
        };
        let c = s.compile().unwrap();
        assert_eq!(c.components.len(), 4);
        assert_eq!(c.density, Some(1.0));
        assert!(c.even);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SequenceSpec::Lacunary {
            ratio: 1.0,
            even: false
        }
        .compile()
        .is_err());
        assert!(SequenceSpec::ComplexPerturbed {
            offset: OffsetFn::LnSq,
            positive_only: false
        }
        .compile()
        .is_err());
        assert_eq!(
            SequenceSpec::ExplicitList {
                points: vec![PointSpec {
                    re: 0.0,
                    im: 0.0,
                    multiplicity: 1
                }]
            }
            .compile(),
            Err(crate::Error::ZeroInList)
        );
    }
}
