//! One function per task; each returns the task section of the report.

use anyhow::{Context, Result};
use serde::Serialize;
use slowdec::criteria::{
    check_lemma2, check_slow_decrease_def, check_theorem1, check_theorem2, check_theorem3,
    lemma1_consistency, lemma3_diagnostic, lemma4_diagnostic, AsymptoticReport, CriterionReport,
    DiagnosticValue, Lemma1Params, Lemma1Record, Outcome, Trend, Verdict,
};
use slowdec::product::LogModulusSource;
use slowdec::repr::{cover_all_radius, favorov_log, favorov_log_cover_all, PoissonOracle, PoissonValue};
use slowdec::{
    build_sequence, fixtures, log_abs_product, Complex64, DensityEstimate, LogModulus,
    ProductEvaluator, ZeroSequence,
};

use crate::config::RunConfig;

/// What was materialized.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceSummary {
    pub radius: f64,
    pub complete: bool,
    pub distinct_points: usize,
    pub total_multiplicity: u64,
    pub real: bool,
    pub even: bool,
    pub density: Option<f64>,
    pub m0: Option<f64>,
}

impl SequenceSummary {
    pub fn of(seq: &ZeroSequence) -> Self {
        SequenceSummary {
            radius: seq.radius(),
            complete: seq.is_complete(),
            distinct_points: seq.points().len(),
            total_multiplicity: seq.total_multiplicity(),
            real: seq.is_real(),
            even: seq.is_even(),
            density: seq.density(),
            m0: seq.m0(),
        }
    }
}

pub fn materialize(cfg: &RunConfig) -> Result<ZeroSequence> {
    let spec = cfg.spec.as_ref().context("no sequence spec")?;
    let radius = cfg.effective_radius();
    build_sequence(spec, radius).with_context(|| format!("materializing to radius {radius}"))
}

fn evaluator<'a>(cfg: &RunConfig, seq: &'a ZeroSequence) -> Result<ProductEvaluator<'a>> {
    let ev = match cfg.eval.pairing {
        Some(p) => ProductEvaluator::new(seq, p)?,
        None => ProductEvaluator::auto(seq),
    };
    Ok(ev.with_policy(cfg.eval.policy))
}

// ---------------------------------------------------------------- eval

#[derive(Debug, Clone, Serialize)]
pub struct PointValue {
    pub re: f64,
    pub im: f64,
    pub log_modulus: LogModulus,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineSample {
    pub x: f64,
    pub y: f64,
    pub log_modulus: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalResults {
    pub pairing: slowdec::Pairing,
    pub policy: slowdec::TailPolicy,
    pub points: Vec<PointValue>,
    pub line: Vec<LineSample>,
}

pub fn eval(cfg: &RunConfig, seq: &ZeroSequence) -> Result<EvalResults> {
    let ev = evaluator(cfg, seq)?;
    let points = cfg
        .eval
        .points
        .iter()
        .map(|&[re, im]| {
            let lm = log_abs_product(&ev, Complex64::new(re, im))
                .with_context(|| format!("evaluating at {re}{im:+}i"))?;
            Ok(PointValue {
                re,
                im,
                log_modulus: lm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut line = Vec::new();
    if let Some(l) = cfg.eval.line {
        let xs: Vec<f64> = (0..l.count)
            .map(|i| l.lo + (l.hi - l.lo) * i as f64 / (l.count - 1) as f64)
            .collect();
        let values = ev.scan_line(l.y, &xs)?;
        for (x, v) in xs.into_iter().zip(values) {
            line.push(LineSample {
                x,
                y: l.y,
                log_modulus: v,
                tail_bound: ev.truncation_bound(Complex64::new(x, l.y)),
            });
        }
    }
    Ok(EvalResults {
        pairing: ev.pairing(),
        policy: ev.policy(),
        points,
        line,
    })
}

// ---------------------------------------------------------------- counting

#[derive(Debug, Clone, Serialize)]
pub struct CountSample {
    pub t: f64,
    pub nu: i64,
    /// `nu(t) - Delta t`.
    pub deviation: f64,
    /// `deviation / ln^2 |t|`.
    pub normalized: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingResults {
    /// Counts refer to the real projection of a complex sequence.
    pub projected: bool,
    pub delta: f64,
    pub density_estimate: Option<DensityEstimate>,
    pub samples: Vec<CountSample>,
    pub lemma2: AsymptoticReport,
    pub theorem1: AsymptoticReport,
}

fn density(seq: &ZeroSequence) -> Result<(f64, Option<DensityEstimate>)> {
    match seq.density() {
        Some(d) => Ok((d, None)),
        None => {
            let e = seq.density_estimate()?;
            Ok((e.delta, Some(e)))
        }
    }
}

pub fn counting(cfg: &RunConfig, seq: &ZeroSequence) -> Result<CountingResults> {
    let projected = !seq.is_real();
    let owned;
    let real = if projected {
        owned = seq.project_real()?;
        &owned
    } else {
        seq
    };
    let (delta, estimate) = density(real)?;
    let grid = cfg.grids.criteria().x_grid;
    let mut samples = Vec::with_capacity(2 * grid.len());
    for &x in &grid {
        for t in [-x, x] {
            let nu = real.nu(t)?;
            let deviation = nu as f64 - delta * t;
            samples.push(CountSample {
                t,
                nu,
                deviation,
                normalized: deviation / t.abs().ln().powi(2),
            });
        }
    }
    samples.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(CountingResults {
        projected,
        delta,
        density_estimate: estimate,
        samples,
        lemma2: check_lemma2(real, &grid)?,
        theorem1: check_theorem1(real, delta, &grid)?,
    })
}

// ---------------------------------------------------------------- favorov-check

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub sequence: usize,
    pub re: f64,
    pub im: f64,
    pub product: f64,
    pub favorov: f64,
    /// Radius `R` of the counting-function integral.
    pub r: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FavorovResults {
    /// `random` or `spec`.
    pub source: &'static str,
    pub sequences: usize,
    pub seed: u64,
    /// Whether the identity is exact for the checked sequences (finite lists).
    pub exact: bool,
    pub tolerance: Option<f64>,
    pub max_residual: f64,
    pub within_tolerance: bool,
    pub residuals: Vec<Residual>,
}

pub fn favorov_check(cfg: &RunConfig, seq: Option<&ZeroSequence>) -> Result<FavorovResults> {
    let opts = &cfg.favorov;
    let mut rng = fixtures::rng(cfg.seed);
    let mut residuals = Vec::new();
    let (source, sequences, exact) = match opts.random_sequences {
        Some(n) => {
            for k in 0..n {
                let s = fixtures::random_finite(&mut rng, opts.random_points, opts.probe_radius);
                check_sequence(&s, k, &mut rng, opts.probes, opts.probe_radius, &mut residuals)?;
            }
            ("random", n, true)
        }
        None => {
            let s = seq.context("favorov-check needs a spec or random_sequences")?;
            check_sequence(s, 0, &mut rng, opts.probes, opts.probe_radius, &mut residuals)?;
            ("spec", 1, s.is_complete())
        }
    };
    let max_residual = residuals.iter().map(|r| r.residual).fold(0.0, f64::max);
    let tolerance = exact.then_some(opts.tolerance);
    Ok(FavorovResults {
        source,
        sequences,
        seed: cfg.seed,
        exact,
        tolerance,
        max_residual,
        within_tolerance: tolerance.is_none_or(|t| max_residual <= t),
        residuals,
    })
}

fn check_sequence(
    seq: &ZeroSequence,
    index: usize,
    rng: &mut impl rand::Rng,
    probes: usize,
    probe_radius: f64,
    out: &mut Vec<Residual>,
) -> Result<()> {
    let ev = ProductEvaluator::auto(seq);
    let zs = fixtures::random_probes(rng, seq, probes, probe_radius, 1e-3 * probe_radius.max(1.0));
    for z in zs {
        let product = log_abs_product(&ev, z)?.value;
        let (favorov, r) = if seq.is_complete() {
            (favorov_log_cover_all(seq, z)?, cover_all_radius(seq, z))
        } else {
            (favorov_log(seq, z, seq.radius())?, seq.radius())
        };
        out.push(Residual {
            sequence: index,
            re: z.re,
            im: z.im,
            product,
            favorov,
            r,
            residual: (product - favorov).abs(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------- poisson-check

#[derive(Debug, Clone, Serialize)]
pub struct PoissonRow {
    pub re: f64,
    pub im: f64,
    pub poisson: PoissonValue,
    pub product: f64,
    pub product_tail_bound: f64,
    pub residual: f64,
    /// `quadrature_error + tail_estimate`.
    pub estimate: f64,
    pub within_estimate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonResults {
    pub tail_cut: f64,
    pub quadrature_step: f64,
    pub samples: usize,
    pub fitted_constant: f64,
    pub all_within_estimate: bool,
    pub rows: Vec<PoissonRow>,
}

pub fn poisson_check(cfg: &RunConfig, seq: &ZeroSequence) -> Result<PoissonResults> {
    let ev = ProductEvaluator::auto(seq).with_policy(cfg.eval.policy);
    let opts = &cfg.poisson;
    let oracle = PoissonOracle::new(&ev, opts.tail_cut, opts.quadrature_step)?;
    let zs: Vec<Complex64> = opts.points.iter().map(|&[x, y]| Complex64::new(x, y)).collect();
    let mut rows = Vec::with_capacity(zs.len());
    for (z, p) in zs.iter().zip(oracle.log_abs_many(&zs)) {
        let p = p?;
        let lm = log_abs_product(&ev, *z)?;
        let estimate = p.quadrature_error + p.tail_estimate;
        let residual = (p.value - lm.value).abs();
        rows.push(PoissonRow {
            re: z.re,
            im: z.im,
            poisson: p,
            product: lm.value,
            product_tail_bound: lm.tail_bound,
            residual,
            estimate,
            within_estimate: residual <= estimate + lm.tail_bound,
        });
    }
    Ok(PoissonResults {
        tail_cut: opts.tail_cut,
        quadrature_step: opts.quadrature_step,
        samples: oracle.sample_count(),
        fitted_constant: oracle.fitted_constant(),
        all_within_estimate: rows.iter().all(|r| r.within_estimate),
        rows,
    })
}

// ---------------------------------------------------------------- classify

#[derive(Debug, Clone, Serialize)]
pub struct ProbeTail {
    pub x: f64,
    pub truncation_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyResults {
    pub outcome: Outcome,
    pub witness_a: Option<f64>,
    /// How `outcome` was reached.
    pub rule: String,
    pub definitional: Verdict,
    /// Density tail bound at every probe of the definitional scan.
    pub probe_tail_bounds: Vec<ProbeTail>,
    /// Lemma 2 on the real sequence (or on the projection).
    pub lemma2: AsymptoticReport,
    /// Theorem 2 (even) or Theorem 3 (real) report.
    pub criterion: Option<CriterionReport>,
    /// For complex sequences.
    pub projection: Option<Lemma1Record>,
}

fn combine(a: Outcome, b: Outcome) -> Outcome {
    if a == b {
        a
    } else {
        Outcome::Inconclusive
    }
}

pub fn classify(cfg: &RunConfig, seq: &ZeroSequence) -> Result<ClassifyResults> {
    let def_params = cfg.grids.definition();
    let crit = cfg.grids.criteria();
    let ev = ProductEvaluator::auto(seq);
    let definitional = check_slow_decrease_def(&ev, &def_params)?;
    let probe_tail_bounds = def_params
        .x_grid
        .iter()
        .flat_map(|&x| [-x, x])
        .map(|x| ProbeTail {
            x,
            truncation_bound: ev.truncation_bound(Complex64::new(x, 0.0)),
        })
        .collect();

    let (outcome, rule, lemma2, criterion, projection) = if seq.is_real() {
        let lemma2 = check_lemma2(seq, &crit.x_grid)?;
        let report = if seq.is_even() {
            check_theorem2(seq, &crit)?
        } else {
            check_theorem3(seq, &crit)?
        };
        let (outcome, rule) = if lemma2.trend == Trend::Growing {
            (Outcome::NotSlowlyDecreasing, "lemma-2 ratio grows".to_string())
        } else {
            (
                combine(definitional.outcome, report.outcome),
                format!("definitional check and {} must agree", report.criterion),
            )
        };
        (outcome, rule, lemma2, Some(report), None)
    } else {
        let params = Lemma1Params {
            definition: def_params.clone(),
            criteria: crit.clone(),
        };
        let rec = lemma1_consistency(seq, &params)?;
        let outcome = if rec.agree {
            rec.projected_outcome
        } else {
            Outcome::Inconclusive
        };
        let rule = "projection (theorem-3) and off-axis definitional check must agree".to_string();
        (outcome, rule, rec.projected_lemma2.clone(), None, Some(rec))
    };
    Ok(ClassifyResults {
        outcome,
        witness_a: definitional.witness_a,
        rule,
        definitional,
        probe_tail_bounds,
        lemma2,
        criterion,
        projection,
    })
}

// ---------------------------------------------------------------- diagnostics

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsResults {
    pub lemma3: Vec<DiagnosticValue>,
    pub lemma4: Vec<Lemma4Row>,
    /// Max over min of `|value| / A^2` across the `A` grid.
    pub lemma4_spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma4Row {
    #[serde(rename = "A")]
    pub a: f64,
    pub value: DiagnosticValue,
}

pub fn diagnostics(cfg: &RunConfig, seq: &ZeroSequence) -> Result<DiagnosticsResults> {
    let d = &cfg.diagnostics;
    let xmax = d.lemma3_x.iter().copied().fold(0.0, f64::max);
    let t_upper = d.t_upper.unwrap_or(100.0 * xmax);
    let lemma3 = d
        .lemma3_x
        .iter()
        .map(|&x| lemma3_diagnostic(seq, x, t_upper).map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    let lemma4 = d
        .lemma4_a
        .iter()
        .map(|&a| {
            Ok(Lemma4Row {
                a,
                value: lemma4_diagnostic(seq, d.lemma4_x, a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = lemma4.iter().map(|r| r.value.normalized.abs()).collect();
    let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = norms.iter().copied().fold(0.0, f64::max);
    Ok(DiagnosticsResults {
        lemma3,
        lemma4,
        lemma4_spread: hi / lo,
    })
}
