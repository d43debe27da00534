//! Library side of the `slowdec` command: configuration, task dispatch and
//! report rendering. The binary is a thin clap front end over [`run`].

pub mod config;
pub mod report;
pub mod tasks;

use anyhow::{Context, Result};

pub use config::{Format, RunConfig, Task};
pub use report::{Report, Results, FORMAT_VERSION};

/// Run one configured task and assemble its report.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let seq = match &cfg.spec {
        Some(_) if !(cfg.task == Task::FavorovCheck && cfg.favorov.random_sequences.is_some()) => {
            Some(tasks::materialize(cfg)?)
        }
        _ => None,
    };
    let need = || seq.as_ref().context("task needs a materialized sequence");
    let results = match cfg.task {
        Task::Eval => Results::Eval(tasks::eval(cfg, need()?)?),
        Task::Counting => Results::Counting(tasks::counting(cfg, need()?)?),
        Task::FavorovCheck => Results::FavorovCheck(tasks::favorov_check(cfg, seq.as_ref())?),
        Task::PoissonCheck => Results::PoissonCheck(tasks::poisson_check(cfg, need()?)?),
        Task::Classify => Results::Classify(tasks::classify(cfg, need()?)?),
        Task::Diagnostics => Results::Diagnostics(tasks::diagnostics(cfg, need()?)?),
    };
    Ok(Report {
        format_version: FORMAT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        sequence: seq.as_ref().map(tasks::SequenceSummary::of),
        results,
    })
}

/// Render the report and write it where the config says.
pub fn emit(cfg: &RunConfig, report: &Report) -> Result<()> {
    let text = report.render(cfg.output.format);
    match &cfg.output.path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
