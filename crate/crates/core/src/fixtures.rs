//! Named zero sets and seeded random instances used by tests, benches and the CLI.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::seq::{OffsetFn, SequenceSpec, ZeroPoint, ZeroSequence};

/// `Z \ {0}`.
pub fn integers() -> SequenceSpec {
    SequenceSpec::integers()
}

/// `{ j + ln(1 + j^2) : j = +-1, +-2, ... }`.
pub fn log_shifted() -> SequenceSpec {
    SequenceSpec::Perturbed {
        offset: OffsetFn::Ln1pSq,
        positive_only: false,
    }
}

/// Nonzero integers without `+-2^k`, `k >= 1`: the zeros of
/// `sin(pi z) / (pi z) / prod (1 - z^2/4^k)`.
pub fn lacunary_gaps() -> SequenceSpec {
    SequenceSpec::Difference {
        base: Box::new(SequenceSpec::integers()),
        remove: Box::new(SequenceSpec::Lacunary {
            ratio: 2.0,
            even: true,
        }),
    }
}

/// `{ +-(j + ln^2 j) } U { +-e^sqrt(j) }`.
pub fn log_squared_union() -> SequenceSpec {
    SequenceSpec::Union {
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
    }
}

/// `{ j + ln^2 |j| : j = +-1, +-2, ... }`.
pub fn log_squared_shift() -> SequenceSpec {
    SequenceSpec::Perturbed {
        offset: OffsetFn::LnSq,
        positive_only: false,
    }
}

/// `{ j + 0.3 : j in Z }`.
pub fn shifted_lattice() -> SequenceSpec {
    SequenceSpec::IntegerLattice { offset: 0.3 }
}

/// `{ +-(j + i ln(1 + j)) }`.
pub fn complex_log() -> SequenceSpec {
    SequenceSpec::EvenClosure {
        base: Box::new(SequenceSpec::ComplexPerturbed {
            offset: OffsetFn::Ln1p,
            positive_only: true,
        }),
    }
}

/// [`complex_log`] with multiplicity `ceil(ln^2 2^k)` at index `2^k`.
pub fn complex_log_inflated() -> SequenceSpec {
    SequenceSpec::Inflated {
        base: Box::new(complex_log()),
        index_base: 2,
    }
}

/// Integers with multiplicity `ceil(ln^2 10^k)` at `+-10^k`.
pub fn decade_clusters() -> SequenceSpec {
    SequenceSpec::Inflated {
        base: Box::new(SequenceSpec::integers()),
        index_base: 10,
    }
}

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &[
    "integers",
    "log-shifted",
    "lacunary-gaps",
    "log-squared-union",
    "log-squared-shift",
    "shifted-lattice",
    "complex-log",
    "complex-log-inflated",
    "decade-clusters",
];

pub fn named(name: &str) -> Option<SequenceSpec> {
    Some(match name {
        "integers" => integers(),
        "log-shifted" => log_shifted(),
        "lacunary-gaps" => lacunary_gaps(),
        "log-squared-union" => log_squared_union(),
        "log-squared-shift" => log_squared_shift(),
        "shifted-lattice" => shifted_lattice(),
        "complex-log" => complex_log(),
        "complex-log-inflated" => complex_log_inflated(),
        "decade-clusters" => decade_clusters(),
        _ => return None,
    })
}

/// Random finite sequence: up to `max_points` points with moduli in
/// `[1, max_modulus]`, half of them real, multiplicities 1 to 3.
pub fn random_finite(rng: &mut impl Rng, max_points: usize, max_modulus: f64) -> ZeroSequence {
    let n = rng.random_range(1..=max_points.max(1));
    let points: Vec<ZeroPoint> = (0..n)
        .map(|_| {
            let r = rng.random_range(1.0..=max_modulus);
            let value = if rng.random_bool(0.5) {
                Complex64::new(if rng.random_bool(0.5) { r } else { -r }, 0.0)
            } else {
                Complex64::from_polar(r, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            };
            ZeroPoint {
                value,
                multiplicity: rng.random_range(1..=3),
            }
        })
        .collect();
    ZeroSequence::from_points(&points).expect("random points are nonzero")
}

/// `count` points in the disc `|z| <= radius`, each at least `min_gap`
/// away from every zero of `seq`.
pub fn random_probes(
    rng: &mut impl Rng,
    seq: &ZeroSequence,
    count: usize,
    radius: f64,
    min_gap: f64,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::new(
            rng.random_range(-radius..=radius),
            rng.random_range(-radius..=radius),
        );
        if z.norm() > radius {
            continue;
        }
        if seq.points().iter().all(|p| (p.value - z).norm() >= min_gap) {
            out.push(z);
        }
    }
    out
}

/// Seeded generator shared by every randomized check.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::build_sequence;

    #[test]
    fn every_name_builds() {
        for name in NAMES {
            let spec = named(name).unwrap();
            build_sequence(&spec, 300.0).unwrap();
        }
        assert!(named("nope").is_none());
    }

    #[test]
    fn random_sequences_are_reproducible() {
        let a = random_finite(&mut rng(7), 100, 100.0);
        let b = random_finite(&mut rng(7), 100, 100.0);
        assert_eq!(a.points(), b.points());
        assert!(a.points().iter().all(|p| {
            let m = p.value.norm();
            (1.0 - 1e-12..=100.0 + 1e-12).contains(&m)
        }));
    }
}
