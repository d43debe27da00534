//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with `cargo test -p slowdec --test acceptance -- --nocapture` to see them.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use slowdec::criteria::{
    check_slow_decrease_def, check_theorem1, check_theorem2, check_theorem3, geometric_grid,
    lemma1_consistency, lemma3_diagnostic, lemma4_diagnostic, CriterionGrids, Lemma1Params,
    Outcome, SlowDecreaseParams, Trend,
};
use slowdec::fixtures;
use slowdec::product::Phi0;
use slowdec::repr::{favorov_log_cover_all, PoissonOracle};
use slowdec::{build_sequence, log_abs_product, Pairing, ProductEvaluator, ZeroSequence};

fn report(n: u32, ok: bool, elapsed: Duration, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n}: {detail} [{:.2}s]", elapsed.as_secs_f64());
    assert!(ok, "criterion {n} failed: {detail}");
}

/// `ln |sin(pi z) / (pi z)|` straight from the complex sine.
fn ln_abs_sinc(z: Complex64) -> f64 {
    let pz = z * PI;
    (pz.sin() / pz).norm().ln()
}

fn criterion_grids_radius() -> f64 {
    CriterionGrids::default().required_radius() * 1.05
}

#[test]
fn criterion_01_favorov_identity() {
    let start = Instant::now();
    let mut rng = fixtures::rng(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let seq = fixtures::random_finite(&mut rng, 100, 100.0);
        let ev = ProductEvaluator::auto(&seq);
        let probes = fixtures::random_probes(&mut rng, &seq, 50, 150.0, 1e-3);
        for z in probes {
            let direct = log_abs_product(&ev, z).unwrap().value;
            let favorov = favorov_log_cover_all(&seq, z).unwrap();
            worst = worst.max((direct - favorov).abs());
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        elapsed,
        format!("max |favorov - product| = {worst:.3e} over 100 x 50 probes"),
    );
}

#[test]
fn criterion_02_sine_product() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::integers(), 1e5).unwrap();
    let ev = ProductEvaluator::new(&seq, Pairing::EvenForm).unwrap();
    let half = log_abs_product(&ev, Complex64::new(0.5, 0.0)).unwrap();
    let err_half = (half.value - (2.0 / PI).ln()).abs();

    let mut rng = fixtures::rng(0x5eed_0002);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut all_within = true;
    for _ in 0..20 {
        let z = loop {
            let z = Complex64::new(rng.random_range(-10.0..=10.0), rng.random_range(-10.0..=10.0));
            let off_zero = (z.re - z.re.round()).abs() > 1e-3 || z.im.abs() > 1e-3;
            if z.norm() <= 10.0 && off_zero {
                break z;
            }
        };
        let v = log_abs_product(&ev, z).unwrap();
        let err = (v.value - ln_abs_sinc(z)).abs();
        worst_excess = worst_excess.max(err - v.tail_bound);
        all_within &= err <= v.tail_bound;
    }
    let elapsed = start.elapsed();
    report(
        2,
        err_half <= 1e-5 && all_within && elapsed < Duration::from_secs(30),
        elapsed,
        format!(
            "|value(0.5) - ln(2/pi)| = {err_half:.3e}; max(err - tail_bound) over 20 z = {worst_excess:.3e}"
        ),
    );
}

#[test]
fn criterion_03_poisson_oracle() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::integers(), 2.5e4).unwrap();
    let ev = ProductEvaluator::auto(&seq);
    let oracle = PoissonOracle::new(&ev, 1e4, 1.0).unwrap();
    let zs: Vec<Complex64> = [1.0, 2.5, 5.0, 7.5, 10.0]
        .iter()
        .flat_map(|&y| [0.0, 0.5, 3.3, 10.0, 20.0].map(|x| Complex64::new(x, y)))
        .collect();
    let values = oracle.log_abs_many(&zs);
    let mut bound_ok = true;
    let mut rel_ok = true;
    let mut worst_ratio: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    let mut worst_pointwise: f64 = 0.0;
    for (z, p) in zs.iter().zip(values) {
        let p = p.unwrap();
        let exact = log_abs_product(&ev, *z).unwrap().value;
        let estimate = p.quadrature_error + p.tail_estimate;
        let err = (p.value - exact).abs();
        // Both terms of the representation are of size pi Delta Im z; where
        // ln|phi| crosses zero they cancel, so the scale is the larger one.
        let scale = exact.abs().max(PI * z.im);
        bound_ok &= err <= estimate;
        rel_ok &= estimate <= 1e-2 * scale;
        worst_ratio = worst_ratio.max(err / estimate);
        worst_rel = worst_rel.max(estimate / scale);
        worst_pointwise = worst_pointwise.max(estimate / exact.abs());
    }
    let elapsed = start.elapsed();
    report(
        3,
        bound_ok && rel_ok && elapsed < Duration::from_secs(120),
        elapsed,
        format!(
            "max err/estimate = {worst_ratio:.3}; max estimate/max(|value|, pi Im z) = {worst_rel:.3e} \
             (estimate/|value| up to {worst_pointwise:.3e}); C_fit = {:.3}",
            oracle.fitted_constant()
        ),
    );
}

#[test]
fn criterion_04_log_shifted_sequence() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::log_shifted(), 1e6).unwrap();
    let ev = ProductEvaluator::auto(&seq);
    let verdict = check_slow_decrease_def(&ev, &SlowDecreaseParams::default()).unwrap();
    let mut worst: f64 = 0.0;
    for x in geometric_grid(1e2, 1e5, 16) {
        let dev = seq.nu(x).unwrap() as f64 - x + (1.0 + x * x).ln();
        worst = worst.max(dev.abs());
    }
    let elapsed = start.elapsed();
    let witness_ok = verdict.witness_a.is_some_and(|a| a <= 10.0);
    report(
        4,
        verdict.outcome == Outcome::SlowlyDecreasing
            && witness_ok
            && worst <= 2.0
            && elapsed < Duration::from_secs(120),
        elapsed,
        format!(
            "outcome {:?}, witness_a {:?}, max |nu(x) - x + ln(1+x^2)| = {worst:.3}",
            verdict.outcome, verdict.witness_a
        ),
    );
}

#[test]
fn criterion_05_lacunary_quotient() {
    let start = Instant::now();
    let params = SlowDecreaseParams {
        a_grid: vec![1.0, 2.0, 4.0, 8.0, 16.0, 20.0],
        ..Default::default()
    };
    let verdict = check_slow_decrease_def(&Phi0::default(), &params).unwrap();
    let mut depth_ok = true;
    let mut worst_depth = f64::NEG_INFINITY;
    for d in &verdict.deficits {
        let limit = -0.1 * (2.0 + d.x.abs()).ln().powi(2);
        depth_ok &= d.best_log_modulus <= limit;
        worst_depth = worst_depth.max(d.best_log_modulus - limit);
    }

    let radius = criterion_grids_radius();
    let seq = build_sequence(&fixtures::lacunary_gaps(), radius).unwrap();
    let grids = CriterionGrids::default();
    let t1 = check_theorem1(&seq, 1.0, &grids.x_grid).unwrap();
    let th2 = check_theorem2(&seq, &grids).unwrap();
    let growth: Vec<f64> = th2
        .cond2
        .first_decade_sup
        .iter()
        .zip(&th2.cond2.last_decade_sup)
        .map(|(f, l)| l / f)
        .collect();
    let grows = growth.iter().any(|&g| g >= 1.5);
    let elapsed = start.elapsed();
    report(
        5,
        verdict.outcome == Outcome::NotSlowlyDecreasing
            && depth_ok
            && t1.trend == Trend::Bounded
            && grows
            && elapsed < Duration::from_secs(180),
        elapsed,
        format!(
            "definitional outcome {:?} (witness_a {:?}); max window ln|phi| + 0.1 ln^2(2+x) = {worst_depth:.3}; \
             theorem-1 trend {:?}; cond-2 last/first per A = {growth:.3?}",
            verdict.outcome, verdict.witness_a, t1.trend
        ),
    );
}

#[test]
fn criterion_06_lattice_cond2_bound() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::integers(), criterion_grids_radius()).unwrap();
    let r = check_theorem2(&seq, &CriterionGrids::default()).unwrap();
    let est = r.cond2.double_limsup_estimate;
    let elapsed = start.elapsed();
    report(
        6,
        est <= PI + 0.5 && elapsed < Duration::from_secs(60),
        elapsed,
        format!("double-limsup estimate {est:.4} against pi + 0.5 = {:.4}", PI + 0.5),
    );
}

fn max_count_deviation(seq: &ZeroSequence, grid: &[f64]) -> f64 {
    grid.iter()
        .flat_map(|&t| [t, -t])
        .map(|t| (seq.nu(t).unwrap() as f64 - t).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_07a_log_squared_union() {
    let start = Instant::now();
    let grids = CriterionGrids::default();
    let seq = build_sequence(&fixtures::log_squared_union(), criterion_grids_radius()).unwrap();
    let dev = max_count_deviation(&seq, &grids.x_grid);
    let th2 = check_theorem2(&seq, &grids).unwrap();
    let ev = ProductEvaluator::auto(&seq);
    let def = check_slow_decrease_def(&ev, &SlowDecreaseParams::default()).unwrap();
    let elapsed = start.elapsed();
    report(
        7,
        dev <= 3.0
            && th2.outcome == Outcome::SlowlyDecreasing
            && def.outcome == Outcome::SlowlyDecreasing
            && elapsed < Duration::from_secs(120),
        elapsed,
        format!(
            "union: max |nu(t) - t| = {dev}; theorem-2 {:?}; definitional {:?} (witness_a {:?})",
            th2.outcome, def.outcome, def.witness_a
        ),
    );
}

#[test]
fn criterion_07b_shifted_lattice() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::shifted_lattice(), criterion_grids_radius()).unwrap();
    let shift = seq
        .points()
        .iter()
        .map(|p| (p.value.re - p.value.re.round()).abs())
        .fold(0.0, f64::max);
    let th3 = check_theorem3(&seq, &CriterionGrids::default()).unwrap();
    let elapsed = start.elapsed();
    report(
        7,
        shift <= 0.3 + 1e-9
            && th3.outcome == Outcome::SlowlyDecreasing
            && elapsed < Duration::from_secs(120),
        elapsed,
        format!(
            "shifted lattice: max |mu_k - k| = {shift:.3}; theorem-3 {:?} (estimate {:.4})",
            th3.outcome, th3.cond2.double_limsup_estimate
        ),
    );
}

#[test]
fn criterion_08_symmetrization() {
    let start = Instant::now();
    let radius = criterion_grids_radius();
    let grids = CriterionGrids::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for name in fixtures::NAMES {
        let seq = build_sequence(&fixtures::named(name).unwrap(), radius).unwrap();
        if !seq.is_real() || !seq.is_even() {
            continue;
        }
        let t2 = check_theorem2(&seq, &grids).unwrap();
        let t3 = check_theorem3(&seq, &grids).unwrap();
        ok &= t2.outcome == t3.outcome;
        lines.push(format!("{name}: {:?}/{:?}", t2.outcome, t3.outcome));
    }
    let elapsed = start.elapsed();
    report(8, ok && !lines.is_empty(), elapsed, lines.join("; "));
}

#[test]
fn criterion_09_projection() {
    let start = Instant::now();
    let params = Lemma1Params::default();
    let radius = params.criteria.required_radius() * 1.05;
    let seq = build_sequence(&fixtures::complex_log(), radius).unwrap();
    let plain = lemma1_consistency(&seq, &params).unwrap();
    let plain_ok = plain.agree
        && plain.projected_outcome == Outcome::SlowlyDecreasing
        && plain.original_outcome == Outcome::SlowlyDecreasing;

    let dyadic: Vec<f64> = (7..=16).map(|k| 2f64.powi(k)).collect();
    let inflated_params = Lemma1Params {
        definition: SlowDecreaseParams {
            x_grid: dyadic.clone(),
            ..Default::default()
        },
        criteria: CriterionGrids {
            x_grid: dyadic,
            ..Default::default()
        },
    };
    let radius = inflated_params.criteria.required_radius() * 1.05;
    let seq = build_sequence(&fixtures::complex_log_inflated(), radius).unwrap();
    let inflated = lemma1_consistency(&seq, &inflated_params).unwrap();
    let inflated_ok = inflated.projected_lemma2.trend == Trend::Growing
        && inflated.original_lemma2.trend == Trend::Growing
        && inflated.projected_outcome == Outcome::NotSlowlyDecreasing
        && inflated.original_outcome == Outcome::NotSlowlyDecreasing;
    let elapsed = start.elapsed();
    report(
        9,
        plain_ok && inflated_ok,
        elapsed,
        format!(
            "complex-log {:?}/{:?} agree={}; inflated lemma-2 {:?}/{:?} ({:.2}/{:.2}), {:?}/{:?} (scan {:?})",
            plain.projected_outcome,
            plain.original_outcome,
            plain.agree,
            inflated.projected_lemma2.trend,
            inflated.original_lemma2.trend,
            inflated.projected_lemma2.last_decade_sup / inflated.projected_lemma2.first_decade_sup,
            inflated.original_lemma2.last_decade_sup / inflated.original_lemma2.first_decade_sup,
            inflated.projected_outcome,
            inflated.original_outcome,
            inflated.original.outcome
        ),
    );
}

#[test]
fn criterion_10_diagnostics() {
    let start = Instant::now();
    let seq = build_sequence(&fixtures::integers(), 2e6).unwrap();
    let l3: Vec<f64> = [1e3, 1e4]
        .iter()
        .map(|&x| lemma3_diagnostic(&seq, x, 1e6).unwrap().normalized)
        .collect();
    let l3_ok = l3.iter().all(|v| v.abs() <= 5.0);
    let l4: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&a| lemma4_diagnostic(&seq, 1e4, a).unwrap().normalized)
        .collect();
    let (lo, hi) = l4
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v.abs()), hi.max(v.abs())));
    let l4_ok = lo > 0.0 && hi <= 2.0 * lo;
    let elapsed = start.elapsed();
    report(
        10,
        l3_ok && l4_ok,
        elapsed,
        format!("lemma-3 value/ln x = {l3:.4?}; lemma-4 value/A^2 = {l4:.5?}"),
    );
}
