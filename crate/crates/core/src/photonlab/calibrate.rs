//! Choosing the default noise strength.

use serde::Serialize;

use super::counts::ShotPlan;
use super::experiment::{run_state, Mode};
use super::noise::NoiseModel;
use crate::error::{Error, Result};
use crate::qcore::CatalogState;

/// Centre of the band [0.03, 0.09] bits the five bounded-side entropies
/// occupy in the experiment.
pub const TARGET_MEAN_RHS: f64 = 0.06;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CalibrationPoint {
    pub depolarizing: f64,
    pub mean_rhs_term: f64,
    pub min_rhs_term: f64,
    pub max_rhs_term: f64,
    pub lhs: f64,
    pub margin: f64,
    pub sd_violation: Option<f64>,
}

fn point(p: f64, plan: Option<&ShotPlan>) -> Result<CalibrationPoint> {
    let rho = CatalogState::from_index(1)?.density::<f64>();
    let noise = NoiseModel::depolarizing(p)?;
    let row = match plan {
        Some(plan) => run_state("calibration", &rho, &noise, plan, Mode::Sampled)?,
        None => run_state("calibration", &rho, &noise, &ShotPlan::default(), Mode::Analytic)?,
    };
    let rhs = &row.terms[..5];
    Ok(CalibrationPoint {
        depolarizing: p,
        mean_rhs_term: rhs.iter().sum::<f64>() / 5.0,
        min_rhs_term: rhs.iter().copied().fold(f64::INFINITY, f64::min),
        max_rhs_term: rhs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        lhs: row.lhs,
        margin: row.margin,
        sd_violation: row.sd_violation,
    })
}

/// Entropies and margin over a grid of strengths; with a plan the points
/// are sampled and carry an SD-of-violation.
pub fn calibration_sweep(strengths: &[f64], plan: Option<&ShotPlan>) -> Result<Vec<CalibrationPoint>> {
    strengths.iter().map(|&p| point(p, plan)).collect()
}

/// Strength whose analytic mean bounded-side entropy equals `target`,
/// by bisection (the mean is increasing in the strength on [0, 1]).
pub fn calibrate_depolarizing(target: f64) -> Result<f64> {
    let mean = |p: f64| point(p, None).map(|c| c.mean_rhs_term);
    if !(0.0..=mean(1.0)?).contains(&target) {
        return Err(Error::InvalidInput(format!("target {target} not reachable")));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mean(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
