use std::fmt::Write as _;

use anyhow::{Context as _, Result};
use entrocon::nct::all_assignments;
use entrocon::optics::{verify_all, SettingTable, TemplateSet};
use entrocon::photonlab::{run_table, ExperimentReport};
use entrocon::pmsquare::{check_compatibility, context_product_sign, contexts, ObservableId};
use entrocon::qcore::{CatalogState, Sign};

use crate::config::{Format, RunConfig};

/// What a command produced. `success` maps to the exit status.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub success: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyTarget {
    Contexts,
    Optics,
    Classical,
}

/// Runs the table on a pool of `config.threads` workers.
pub fn execute(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let states = config.resolve_states()?;
    let plan = config.plan()?;
    let run = || run_table(&states, &config.noise, &plan, config.mode);
    let report = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(run)?,
        None => run()?,
    };
    Ok(report)
}

pub fn render(report: &ExperimentReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()? + "\n",
    })
}

pub fn cmd_run(config: &RunConfig) -> Result<Outcome> {
    let report = execute(config)?;
    let body = render(&report, config.format)?;
    let mut out = Outcome { success: true, ..Outcome::default() };
    match &config.output {
        Some(path) => std::fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?,
        None => out.stdout = body,
    }
    let margins = report.rows.iter().map(|r| r.margin);
    let min_margin = margins.clone().fold(f64::INFINITY, f64::min);
    let max_margin = margins.fold(f64::NEG_INFINITY, f64::max);
    write!(out.stderr, "{} states, margin {min_margin:.5}..{max_margin:.5}", report.rows.len())?;
    match report.sd_range() {
        Some((lo, hi)) => writeln!(out.stderr, ", SD-of-violation min {lo:.1} max {hi:.1}")?,
        None => writeln!(out.stderr, " (analytic, no SD)")?,
    }
    Ok(out)
}

fn verify_contexts() -> Result<Outcome> {
    let mut out = Outcome { success: true, ..Outcome::default() };
    let expected = [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus];
    writeln!(out.stdout, "context product signs")?;
    for (ctx, want) in contexts().iter().zip(expected) {
        let got = context_product_sign::<f64>(ctx)?;
        let ok = got == want && check_compatibility(&ctx.members())?;
        writeln!(out.stdout, "  {:<22} {got}  {}", ctx.to_string(), if ok { "ok" } else { "FAIL" })?;
        if !ok {
            out.success = false;
            writeln!(out.stderr, "context {ctx}: product {got}, expected {want}")?;
        }
    }
    writeln!(out.stdout, "commutation matrix (1 = commute)")?;
    write!(out.stdout, "  {:>6}", "")?;
    for id in ObservableId::ALL {
        write!(out.stdout, "{:>6}", id.name())?;
    }
    writeln!(out.stdout)?;
    for x in ObservableId::ALL {
        write!(out.stdout, "  {:>6}", x.name())?;
        for y in ObservableId::ALL {
            let commute = x == y || check_compatibility(&[x, y])?;
            write!(out.stdout, "{:>6}", u8::from(commute))?;
        }
        writeln!(out.stdout)?;
    }
    Ok(out)
}

fn verify_optics() -> Result<Outcome> {
    let mut out = Outcome { success: true, ..Outcome::default() };
    let reports = verify_all(&SettingTable::bundled(), &TemplateSet::bundled())?;
    writeln!(out.stdout, "{:<8}{:>5}  {:<16}{:>12}{:>14}  result", "meas", "out", "device", "||E-P||", "||V-P||/phase")?;
    for r in &reports {
        writeln!(
            out.stdout,
            "{:<8}{:>5}  {:<16}{:>12.3e}{:>14.3e}  {}",
            r.measurement.name(),
            r.outcome.to_string(),
            r.device,
            r.effect_distance,
            r.instrument_distance,
            if r.passed { "pass" } else { "FAIL" }
        )?;
        if !r.passed {
            out.success = false;
            writeln!(out.stderr, "setting ({}, {}) misses its projector by {:.3e}", r.measurement, r.outcome, r.metric())?;
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(out.stdout, "{passed}/{} settings pass", reports.len())?;
    Ok(out)
}

fn verify_classical() -> Result<Outcome> {
    let mut out = Outcome { success: true, ..Outcome::default() };
    writeln!(out.stdout, "{:>3} {:>3} {:>3} {:>3}   q'1..q'6", "A", "a", "B", "b")?;
    let mut passed = 0;
    let mut total = 0;
    for (base, assignment) in all_assignments() {
        total += 1;
        let products = assignment.products();
        let ok = products.iter().all(|&s| s == Sign::Plus);
        passed += usize::from(ok);
        let cols: Vec<String> = base.iter().map(|s| format!("{:>3}", s.to_string())).collect();
        let prods: Vec<String> = products.iter().map(Sign::to_string).collect();
        writeln!(out.stdout, "{}   {}  {}", cols.join(" "), prods.join(" "), if ok { "ok" } else { "FAIL" })?;
        if !ok {
            out.success = false;
            writeln!(out.stderr, "assignment {base:?} gives products {prods:?}")?;
        }
    }
    writeln!(out.stdout, "{passed}/{total} assignments pass")?;
    Ok(out)
}

pub fn cmd_verify(target: VerifyTarget) -> Result<Outcome> {
    match target {
        VerifyTarget::Contexts => verify_contexts(),
        VerifyTarget::Optics => verify_optics(),
        VerifyTarget::Classical => verify_classical(),
    }
}

pub fn cmd_states_list() -> Result<Outcome> {
    let mut out = Outcome { success: true, ..Outcome::default() };
    for s in CatalogState::all() {
        writeln!(out.stdout, "{:<6} {:<5} {}", s.label(), if s.is_pure() { "pure" } else { "mixed" }, s.describe())?;
    }
    Ok(out)
}
