//! Monte Carlo estimates of cycle-count moments under the uniform measure.
//!
//! Random stream contract: trial `i` draws from ChaCha8 seeded with
//! `seed_from_u64(seed)` and switched to stream `i`. A trial's randomness
//! therefore depends only on `(seed, i)`, never on which worker ran it, and
//! the integer tallies are merged exactly, so reports are reproducible for
//! any thread count.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycles::{power_cycle_type, CycleType, MomentSpec};
use crate::error::{Error, Result};
use crate::number_theory::ExactScalar;

/// Cycle type of a uniformly random permutation of `n` points.
///
/// The cycle through the smallest unplaced point has a length uniform on
/// `1..=m` when `m` points remain, so only the cycle lengths are drawn and
/// no permutation is materialized.
pub fn random_cycle_type<R: Rng + ?Sized>(n: u64, rng: &mut R) -> CycleType {
    let mut lengths = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let len = rng.random_range(1..=remaining);
        lengths.push((len, 1));
        remaining -= len;
    }
    CycleType::from_counts(lengths).expect("drawn lengths are positive")
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub spec: MomentSpec,
    pub n: u64,
    pub q: u64,
    pub trials: u64,
    pub seed: u64,
    /// Exact sample mean.
    pub mean: ExactScalar,
    pub estimate: f64,
    pub standard_error: f64,
}

/// Sample mean of `∏ c_{k_j}(π^q)^{m_j}` over `trials` uniform permutations.
pub fn empirical_moment(
    spec: &MomentSpec,
    n: u64,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::Zero("trials"));
    }
    if n == 0 {
        return Err(Error::Zero("n"));
    }
    if q == 0 {
        return Err(Error::Zero("q"));
    }
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = random_cycle_type(n, &mut trial_rng(seed, i));
            let x = spec.evaluate(&power_cycle_type(&t, q).expect("q checked"));
            let sq = &x * &x;
            (x, sq)
        })
        .reduce(
            || (BigUint::zero(), BigUint::zero()),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    let count = ExactScalar::from(trials);
    let mean = ExactScalar::from(sum.clone()) / count.clone();
    let standard_error = if trials == 1 {
        0.0
    } else {
        // Unbiased variance (Σx² - (Σx)²/N) / (N - 1), then sqrt(var / N).
        let s1 = ExactScalar::from(sum);
        let centered = ExactScalar::from(sum_sq) - &(&s1 * &s1) / &count;
        let var = centered / (count.clone() - ExactScalar::one());
        (var / count).to_f64().max(0.0).sqrt()
    };
    Ok(SampleReport {
        spec: spec.clone(),
        n,
        q,
        trials,
        seed,
        estimate: mean.to_f64(),
        mean,
        standard_error,
    })
}
