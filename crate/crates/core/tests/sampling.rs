use entrocon::pmsquare::{contexts, joint_distribution, outcome_index, sequential_sample};
use entrocon::qcore::{random_state, RandomStateKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson statistic over bins with non-negligible expectation, and the
/// number of such bins.
fn pearson(observed: &[u64; 8], probs: &[f64; 8], n: f64) -> (f64, usize) {
    let mut stat = 0.0;
    let mut bins = 0;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = n * p;
        if e < 1e-9 {
            assert_eq!(o, 0, "outcome with zero probability observed");
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        bins += 1;
    }
    (stat, bins)
}

#[test]
fn sequential_sampling_fits_joint_distribution() {
    const SHOTS: usize = 100_000;
    for case in 0..10u64 {
        let rho = random_state(1000 + case, if case % 2 == 0 { RandomStateKind::Pure } else { RandomStateKind::Mixed });
        let ctx = contexts()[case as usize % 6];
        let probs = *joint_distribution(&rho, &ctx).probabilities();
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let mut counts = [0u64; 8];
        for _ in 0..SHOTS {
            counts[outcome_index(sequential_sample(&rho, &ctx, &mut rng))] += 1;
        }
        let (stat, bins) = pearson(&counts, &probs, SHOTS as f64);
        let dof = (bins - 1) as f64;
        let p_value = 1.0 - ChiSquared::new(dof).unwrap().cdf(stat);
        assert!(p_value > 1e-3, "case {case} {ctx}: chi2={stat:.2} dof={dof} p={p_value:.2e}");
    }
}
