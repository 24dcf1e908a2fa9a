//! Poissonian photon counts and the frequencies derived from them.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::entropic::{evaluate, inequality_terms, EntropySextet, InequalityVerdict};
use crate::error::{Error, Result};
use crate::nct::{classical_products_from_pairs, mix_all, PairDistribution};
use crate::pmsquare::{product_distribution, JointDistribution8, ProductDistribution};

pub const DEFAULT_SHOTS: u64 = 20_000;
pub const DEFAULT_RESAMPLES: usize = 1_000;
/// Fewest bootstrap resamples accepted for SD output.
pub const MIN_RESAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotPlan {
    /// Mean number of photons registered per measurement setting.
    pub shots: u64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for ShotPlan {
    fn default() -> Self {
        Self { shots: DEFAULT_SHOTS, resamples: DEFAULT_RESAMPLES, seed: 0 }
    }
}

impl ShotPlan {
    pub fn new(shots: u64, resamples: usize, seed: u64) -> Result<Self> {
        let plan = Self { shots, resamples, seed };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidInput("shots must be at least 1".into()));
        }
        if self.resamples < MIN_RESAMPLES {
            return Err(Error::InvalidInput(format!("resamples must be at least {MIN_RESAMPLES}")));
        }
        Ok(())
    }
}

/// One Poisson draw; a zero mean yields exactly zero.
pub fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
}

/// Independent Poisson counts per bin with mean `shots * p`.
pub fn simulate_counts<const K: usize, R: Rng + ?Sized>(probs: &[f64; K], shots: u64, rng: &mut R) -> [u64; K] {
    probs.map(|p| poisson(shots as f64 * p, rng))
}

/// Relative frequencies; an all-zero record is [`Error::EmptyData`].
pub fn empirical_distribution<const K: usize>(counts: &[u64; K]) -> Result<[f64; K]> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyData);
    }
    Ok(counts.map(|n| n as f64 / total as f64))
}

/// Raw counts of one simulated run: eight outcome bins per context (canonical
/// order) and four bins per classical pair (`Aa, Bb, AB, ab`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub contexts: [[u64; 8]; 6],
    pub pairs: [[u64; 4]; 4],
}

impl CountRecord {
    pub fn simulate<R: Rng + ?Sized>(
        joints: &[[f64; 8]; 6],
        pairs: &[[f64; 4]; 4],
        shots: u64,
        rng: &mut R,
    ) -> Self {
        let contexts = std::array::from_fn(|i| simulate_counts(&joints[i], shots, rng));
        let pairs = std::array::from_fn(|i| simulate_counts(&pairs[i], shots, rng));
        Self { contexts, pairs }
    }

    /// Every bin redrawn as Poisson with its observed count as mean.
    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let redraw = |n: u64, rng: &mut R| poisson(n as f64, rng);
        Self {
            contexts: self.contexts.map(|c| c.map(|n| redraw(n, rng))),
            pairs: self.pairs.map(|c| c.map(|n| redraw(n, rng))),
        }
    }

    pub fn totals(&self) -> ([u64; 6], [u64; 4]) {
        (self.contexts.map(|c| c.iter().sum()), self.pairs.map(|c| c.iter().sum()))
    }

    pub fn frequencies(&self) -> Result<([[f64; 8]; 6], [[f64; 4]; 4])> {
        let mut joints = [[0.0; 8]; 6];
        for (j, c) in joints.iter_mut().zip(&self.contexts) {
            *j = empirical_distribution(c)?;
        }
        let mut pairs = [[0.0; 4]; 4];
        for (p, c) in pairs.iter_mut().zip(&self.pairs) {
            *p = empirical_distribution(c)?;
        }
        Ok((joints, pairs))
    }
}

/// Result of pushing context and pair statistics through the inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub quantum: [ProductDistribution; 6],
    pub mixed: [ProductDistribution; 6],
    pub sextet: EntropySextet,
    pub verdict: InequalityVerdict,
}

/// quantum products, classical products from the `Aa`/`Bb` pairs, their
/// equal mixture, its entropies and the verdict.
pub fn evaluate_statistics(joints: &[[f64; 8]; 6], pairs: &[[f64; 4]; 4]) -> Result<Evaluation> {
    let mut quantum = [ProductDistribution::uniform(); 6];
    for (q, j) in quantum.iter_mut().zip(joints) {
        *q = product_distribution(&JointDistribution8::new(*j)?)?;
    }
    let classical = classical_products_from_pairs(&PairDistribution::new(pairs[0])?, &PairDistribution::new(pairs[1])?);
    let mixed = mix_all(&quantum, &classical);
    let sextet = inequality_terms(&mixed)?;
    Ok(Evaluation { quantum, mixed, sextet, verdict: evaluate(&sextet) })
}

pub fn evaluate_counts(record: &CountRecord) -> Result<Evaluation> {
    let (joints, pairs) = record.frequencies()?;
    evaluate_statistics(&joints, &pairs)
}
