//! Poisson bootstrap of the entropy terms and the violation margin.
//!
//! Each resample redraws every count as Poisson around its observed value
//! and re-evaluates the whole pipeline. Unlike first-order propagation this
//! stays finite at deterministic outcomes, where the entropy slope diverges.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::counts::{evaluate_counts, poisson, CountRecord};
use crate::entropic::h_binary;
use crate::error::{Error, Result};
use crate::pmsquare::BinaryDistribution;

/// Generator for resample `k`: the base seed on stream `k + 1` (stream 0
/// is used for the counts themselves).
pub fn resample_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64 + 1);
    rng
}

/// Sample mean and (n-1) standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub sigma: [f64; 6],
    pub sigma_margin: f64,
    pub mean_terms: [f64; 6],
    pub mean_margin: f64,
    /// Resamples in which every setting still registered a photon.
    pub valid_resamples: usize,
}

pub fn bootstrap_sigma(record: &CountRecord, resamples: usize, seed: u64) -> Result<BootstrapSummary> {
    let mut terms: [Vec<f64>; 6] = Default::default();
    let mut margins = Vec::with_capacity(resamples);
    for k in 0..resamples {
        let redrawn = record.resample(&mut resample_rng(seed, k));
        let eval = match evaluate_counts(&redrawn) {
            Ok(e) => e,
            Err(Error::EmptyData) => continue,
            Err(e) => return Err(e),
        };
        for (acc, &h) in terms.iter_mut().zip(&eval.sextet.terms) {
            acc.push(h);
        }
        margins.push(eval.verdict.margin);
    }
    if margins.len() < 2 {
        return Err(Error::EmptyData);
    }
    let mut sigma = [0.0; 6];
    let mut mean_terms = [0.0; 6];
    for i in 0..6 {
        (mean_terms[i], sigma[i]) = mean_and_std(&terms[i]);
    }
    let (mean_margin, sigma_margin) = mean_and_std(&margins);
    Ok(BootstrapSummary { sigma, sigma_margin, mean_terms, mean_margin, valid_resamples: margins.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinaryBootstrap {
    pub sigma: f64,
    pub mean: f64,
}

/// Bootstrap spread of the binary entropy of counts `(n_plus, n_minus)`.
pub fn bootstrap_binary_entropy(counts: [u64; 2], resamples: usize, seed: u64) -> Result<BinaryBootstrap> {
    let mut hs = Vec::with_capacity(resamples);
    for k in 0..resamples {
        let mut rng = resample_rng(seed, k);
        let plus = poisson(counts[0] as f64, &mut rng);
        let minus = poisson(counts[1] as f64, &mut rng);
        let total = plus + minus;
        if total == 0 {
            continue;
        }
        let d = BinaryDistribution { p_plus: plus as f64 / total as f64, p_minus: minus as f64 / total as f64 };
        hs.push(h_binary(&d)?);
    }
    if hs.len() < 2 {
        return Err(Error::EmptyData);
    }
    let (mean, sigma) = mean_and_std(&hs);
    Ok(BinaryBootstrap { sigma, mean })
}

/// First-order propagation `|log2((1-p)/p)| sqrt(p(1-p)/n)`. Infinite at
/// `p` in {0, 1}, where the entropy slope diverges.
pub fn first_order_sigma_h(p: f64, n: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return f64::INFINITY;
    }
    ((1.0 - p) / p).log2().abs() * (p * (1.0 - p) / n).sqrt()
}
