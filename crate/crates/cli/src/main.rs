use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use slowdec::{fixtures, Pairing, SequenceSpec, TailPolicy};
use slowdec_cli::config::LineSpec;
use slowdec_cli::{emit, run, Format, RunConfig, Task};

/// Canonical products over zero sets, oracle checks and slow-decrease classification.
#[derive(Parser, Debug)]
#[command(name = "slowdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a TOML config; flags override its fields.
    Run {
        config: PathBuf,
        #[arg(long, value_enum)]
        task: Option<Task>,
        #[command(flatten)]
        common: Common,
    },
    /// ln|phi| at points and along a line.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Points as re:im, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_point)]
        points: Vec<[f64; 2]>,
        /// lo:hi:count[:y]
        #[arg(long, value_parser = parse_line)]
        line: Option<LineSpec>,
        #[arg(long, value_enum)]
        pairing: Option<PairingArg>,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// nu(t), L(t) / ln^2 t and the multiplicity ratio.
    Counting {
        #[command(flatten)]
        common: Common,
    },
    /// Counting-function integral against the product.
    FavorovCheck {
        #[command(flatten)]
        common: Common,
        /// Use this many random finite sequences instead of --spec.
        #[arg(long)]
        random_sequences: Option<usize>,
        #[arg(long)]
        random_points: Option<usize>,
        #[arg(long)]
        probes: Option<usize>,
    },
    /// Half-plane Poisson representation against the product.
    PoissonCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tail_cut: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_point)]
        points: Vec<[f64; 2]>,
    },
    /// Definitional check plus the applicable criteria.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Diagnostic integrals.
    Diagnostics {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML file holding a sequence spec.
    #[arg(long, conflicts_with = "fixture")]
    spec: Option<PathBuf>,
    /// Built-in sequence by name (see `slowdec classify --fixture help`).
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "A-grid", value_delimiter = ',')]
    big_a_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    x_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    a_grid: Option<Vec<f64>>,
    #[arg(long)]
    window_resolution: Option<f64>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum PairingArg {
    PrincipalValue,
    EvenForm,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum PolicyArg {
    Modeled,
    Truncated,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok([p(re)?, p(im)?])
}

fn parse_line(s: &str) -> Result<LineSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err("expected lo:hi:count[:y]".into());
    }
    let f = |v: &str| v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(LineSpec {
        lo: f(parts[0])?,
        hi: f(parts[1])?,
        count: parts[2].parse().map_err(|e| format!("count: {e}"))?,
        y: parts.get(3).map(|v| f(v)).transpose()?.unwrap_or(0.0),
    })
}

fn load_spec(path: &PathBuf) -> Result<SequenceSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing spec {}", path.display()))
}

impl Common {
    fn apply(self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(p) = &self.spec {
            cfg.spec = Some(load_spec(p)?);
        }
        if let Some(name) = &self.fixture {
            match fixtures::named(name) {
                Some(s) => cfg.spec = Some(s),
                None => bail!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", ")),
            }
        }
        if self.radius.is_some() {
            cfg.radius = self.radius;
        }
        if let Some(p) = self.out {
            cfg.output.path = Some(p);
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        let g = &mut cfg.grids;
        g.big_a_grid = self.big_a_grid.or(g.big_a_grid.take());
        g.x_grid = self.x_grid.or(g.x_grid.take());
        g.a_grid = self.a_grid.or(g.a_grid.take());
        g.window_resolution = self.window_resolution.or(g.window_resolution);
        Ok(())
    }
}

fn build(cmd: Command) -> Result<RunConfig> {
    let (mut cfg, common) = match cmd {
        Command::Run { config, task, common } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(t) = task {
                cfg.task = t;
            }
            (cfg, common)
        }
        Command::Eval {
            common,
            points,
            line,
            pairing,
            policy,
        } => {
            let mut cfg = RunConfig::new(Task::Eval, None);
            cfg.eval.points = points;
            cfg.eval.line = line;
            cfg.eval.pairing = pairing.map(|p| match p {
                PairingArg::PrincipalValue => Pairing::PrincipalValue,
                PairingArg::EvenForm => Pairing::EvenForm,
            });
            if let Some(p) = policy {
                cfg.eval.policy = match p {
                    PolicyArg::Modeled => TailPolicy::Modeled,
                    PolicyArg::Truncated => TailPolicy::Truncated,
                };
            }
            (cfg, common)
        }
        Command::Counting { common } => (RunConfig::new(Task::Counting, None), common),
        Command::FavorovCheck {
            common,
            random_sequences,
            random_points,
            probes,
        } => {
            let mut cfg = RunConfig::new(Task::FavorovCheck, None);
            cfg.favorov.random_sequences = random_sequences;
            if let Some(n) = random_points {
                cfg.favorov.random_points = n;
            }
            if let Some(n) = probes {
                cfg.favorov.probes = n;
            }
            (cfg, common)
        }
        Command::PoissonCheck {
            common,
            tail_cut,
            step,
            points,
        } => {
            let mut cfg = RunConfig::new(Task::PoissonCheck, None);
            if let Some(t) = tail_cut {
                cfg.poisson.tail_cut = t;
            }
            if let Some(s) = step {
                cfg.poisson.quadrature_step = s;
            }
            if !points.is_empty() {
                cfg.poisson.points = points;
            }
            (cfg, common)
        }
        Command::Classify { common } => (RunConfig::new(Task::Classify, None), common),
        Command::Diagnostics { common } => (RunConfig::new(Task::Diagnostics, None), common),
    };
    common.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cfg, &report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.checks_passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("a check exceeded its tolerance; see the report");
        ExitCode::from(3)
    }
}
