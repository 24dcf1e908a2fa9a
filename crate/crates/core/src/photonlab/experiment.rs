//! Per-state pipeline and whole-table runs.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bootstrap::bootstrap_sigma;
use super::counts::{evaluate_counts, evaluate_statistics, CountRecord, ShotPlan};
use super::noise::{depolarize_outcomes, NoiseModel};
use crate::error::{Error, Result};
use crate::nct::{pair_distribution, ClassicalPair};
use crate::optics::DeviceLibrary;
use crate::pmsquare::{contexts, joint_distribution};
use crate::qcore::{CatalogState, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact probabilities, no statistics.
    Analytic,
    /// Poissonian counts with bootstrap errors.
    Sampled,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "sampled" => Ok(Mode::Sampled),
            _ => Err(Error::InvalidInput(format!("mode {s:?}: expected analytic or sampled"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Sampled => "sampled",
        })
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of a labelled sub-task: `splitmix64(master ^ fnv1a(label))`.
/// Depends only on the label, never on scheduling or position.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    splitmix64(master ^ fnv1a(label.as_bytes()))
}

fn devices() -> &'static DeviceLibrary {
    static LIB: OnceLock<DeviceLibrary> = OnceLock::new();
    LIB.get_or_init(DeviceLibrary::bundled)
}

/// Outcome statistics the noisy apparatus would produce: six context
/// joints (canonical order) and the four classical pairs.
pub fn noisy_statistics(rho: &DensityMatrix<f64>, noise: &NoiseModel, seed: u64) -> Result<([[f64; 8]; 6], [[f64; 4]; 4])> {
    noise.validate()?;
    let rho = noise.prepare(rho)?;
    let mut joints = [[0.0; 8]; 6];
    let mut pairs = ClassicalPair::ALL.map(|p| *pair_distribution(&rho, p).probabilities());
    if noise.uses_optics() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "optics"));
        for (j, ctx) in joints.iter_mut().zip(contexts()) {
            *j = *devices().jittered_joint_distribution(&rho, &ctx, noise.angle_jitter_sigma, &mut rng)?.probabilities();
        }
        // Pairs are marginals of the contexts that contain them.
        let marginal_pair = |j: &[f64; 8]| {
            let mut p = [0.0; 4];
            for (k, v) in j.iter().enumerate() {
                p[k >> 1] += v;
            }
            p
        };
        pairs = [marginal_pair(&joints[0]), marginal_pair(&joints[1]), marginal_pair(&joints[3]), marginal_pair(&joints[4])];
    } else {
        for (j, ctx) in joints.iter_mut().zip(contexts()) {
            *j = *joint_distribution(&rho, &ctx).probabilities();
        }
    }
    for j in &mut joints {
        *j = depolarize_outcomes(j, noise.depolarizing)?;
    }
    for p in &mut pairs {
        *p = depolarize_outcomes(p, noise.depolarizing)?;
    }
    Ok((joints, pairs))
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub state: String,
    /// Entropies of the mixed distributions, `H(A.a.alpha) .. H(alpha.beta.gamma)`.
    pub terms: [f64; 6],
    /// Same for the quantum product distributions alone.
    pub quantum_terms: [f64; 6],
    pub sigmas: Option<[f64; 6]>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
    pub sigma_margin: Option<f64>,
    /// `margin / sigma_margin`; infinite when the bootstrap spread is zero.
    pub sd_violation: Option<f64>,
    pub bootstrap_mean_margin: Option<f64>,
    pub counts: Option<CountRecord>,
}

/// Runs the full pipeline for one state. `label` selects the seed stream.
pub fn run_state(label: &str, rho: &DensityMatrix<f64>, noise: &NoiseModel, plan: &ShotPlan, mode: Mode) -> Result<ReportRow> {
    plan.validate()?;
    let seed = derive_seed(plan.seed, label);
    let (joints, pairs) = noisy_statistics(rho, noise, seed)?;
    let exact = evaluate_statistics(&joints, &pairs)?;
    let quantum_terms = crate::entropic::inequality_terms(&exact.quantum)?.terms;
    let row = |eval: &super::counts::Evaluation| ReportRow {
        state: label.to_string(),
        terms: eval.sextet.terms,
        quantum_terms,
        sigmas: None,
        lhs: eval.verdict.lhs,
        rhs: eval.verdict.rhs,
        margin: eval.verdict.margin,
        violated: eval.verdict.violated,
        sigma_margin: None,
        sd_violation: None,
        bootstrap_mean_margin: None,
        counts: None,
    };
    match mode {
        Mode::Analytic => Ok(row(&exact)),
        Mode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(0);
            let record = CountRecord::simulate(&joints, &pairs, plan.shots, &mut rng);
            let eval = evaluate_counts(&record)?;
            let boot = bootstrap_sigma(&record, plan.resamples, seed)?;
            let mut out = row(&eval);
            out.quantum_terms = crate::entropic::inequality_terms(&eval.quantum)?.terms;
            out.sigmas = Some(boot.sigma);
            out.sigma_margin = Some(boot.sigma_margin);
            out.sd_violation = Some(if boot.sigma_margin > 0.0 {
                eval.verdict.margin / boot.sigma_margin
            } else {
                f64::INFINITY.copysign(eval.verdict.margin)
            });
            out.bootstrap_mean_margin = Some(boot.mean_margin);
            out.counts = Some(record);
            Ok(out)
        }
    }
}

/// Rows for labelled states, computed in parallel, returned in input order.
pub fn run_states(states: &[(String, DensityMatrix<f64>)], noise: &NoiseModel, plan: &ShotPlan, mode: Mode) -> Result<Vec<ReportRow>> {
    states.par_iter().map(|(label, rho)| run_state(label, rho, noise, plan, mode)).collect()
}

/// Provenance written alongside every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub software: String,
    pub version: String,
    pub seed: u64,
    pub shots: u64,
    pub resamples: usize,
    pub mode: Mode,
    pub noise: NoiseModel,
    pub depolarizing: f64,
    pub default_depolarizing: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub provenance: Provenance,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    /// Smallest and largest SD-of-violation over the rows (sampled mode).
    pub fn sd_range(&self) -> Option<(f64, f64)> {
        let sds: Vec<f64> = self.rows.iter().filter_map(|r| r.sd_violation).collect();
        if sds.is_empty() {
            return None;
        }
        Some((sds.iter().copied().fold(f64::INFINITY, f64::min), sds.iter().copied().fold(f64::NEG_INFINITY, f64::max)))
    }
}

pub fn run_table(states: &[CatalogState], noise: &NoiseModel, plan: &ShotPlan, mode: Mode) -> Result<ExperimentReport> {
    let labelled: Vec<(String, DensityMatrix<f64>)> = states.iter().map(|s| (s.label(), s.density::<f64>())).collect();
    let rows = run_states(&labelled, noise, plan, mode)?;
    Ok(ExperimentReport {
        provenance: Provenance {
            software: "entrocon".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: plan.seed,
            shots: plan.shots,
            resamples: plan.resamples,
            mode,
            noise: *noise,
            depolarizing: noise.depolarizing,
            default_depolarizing: super::noise::DEFAULT_DEPOLARIZING,
        },
        rows,
    })
}
