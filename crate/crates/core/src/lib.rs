//! Entire functions of exponential type built from prescribed zero sequences,
//! and numerical tests of whether they are slowly decreasing.
//!
//! A function `phi` is slowly decreasing when there is `a > 0` such that for
//! every real `x` some `x'` with `|x - x'| <= a ln(a + |x|)` satisfies
//! `|phi(x')| >= (a + |x'|)^(-a)`. The crate evaluates canonical products
//! over zero sets (`seq`, `product`), cross-checks them against two integral
//! representations (`repr`), and renders the definitional test and the
//! counting-function criteria on finite grids (`criteria`).

pub mod criteria;
pub mod cx;
mod error;
pub mod fixtures;
pub mod product;
pub mod quad;
pub mod repr;
pub mod seq;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use product::{eval_phi0_log, log_abs_product, LogModulus, Pairing, ProductEvaluator, TailPolicy};
pub use seq::{
    build_sequence, counting_snapshot, density_estimate, n_minus, n_plus, nu, project_real,
    CountingSnapshot, DensityEstimate, OffsetFn, PointSpec, SequenceSpec, ZeroPoint, ZeroSequence,
};
