//! Finite-statistics CHSH: multinomial coincidence counts and an `Ŝ`
//! estimate with binomial error bars.
//!
//! Each of the four CHSH setting pairs receives `N` detected pairs, spread
//! over the four `(β/β̄)` analyzer combinations in proportion to their
//! coincidence rates. Every setting pair draws from its own ChaCha stream
//! keyed by `(seed, index)`, so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use thiserror::Error;

use crate::bell::{correlator_terms, BellError, ChshSettings};
use crate::hilbert::BiphotonState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("invalid outcome probabilities {0:?}")]
    InvalidProbability([f64; 4]),
    #[error("need at least 4 pairs per setting, got {0}")]
    TooFewPairs(u64),
    #[error("setting pair {0} has vanishing total coincidence probability")]
    ZeroDenominator(usize),
    #[error(transparent)]
    Bell(#[from] BellError),
}

/// Counts per setting pair, each row ordered like
/// [`correlator_terms`]: `(β,β)`, `(β̄,β̄)`, `(β,β̄)`, `(β̄,β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub counts: [[u64; 4]; 4],
    pub pairs_per_setting: u64,
    pub seed: u64,
}

impl CountTable {
    /// Correlator estimate `Ê = (n₁ + n₂ − n₃ − n₄)/N` for one setting pair.
    pub fn correlator(&self, index: usize) -> f64 {
        let [a, b, c, d] = self.counts[index];
        (a as f64 + b as f64 - c as f64 - d as f64) / self.pairs_per_setting as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshEstimate {
    pub s_hat: f64,
    pub stderr: f64,
    pub correlators: [f64; 4],
    pub correlator_stderr: [f64; 4],
    pub table: CountTable,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn validate(probabilities: [f64; 4]) -> Result<(), StochasticError> {
    let sum: f64 = probabilities.iter().sum();
    if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(StochasticError::InvalidProbability(probabilities));
    }
    Ok(())
}

/// Multinomial draw as a chain of conditional binomials.
fn multinomial(rng: &mut ChaCha8Rng, probabilities: [f64; 4], n: u64) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut remaining = n;
    let mut mass = 1.0;
    for (i, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == 3 || mass <= 0.0 {
            out[i] = remaining;
            break;
        }
        let conditional = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, conditional)
            .expect("conditional probability lies in [0, 1]")
            .sample(rng);
        out[i] = k;
        remaining -= k;
        mass -= p;
    }
    out
}

/// Multinomial sample of `n` outcomes; stream 0 of `seed`.
pub fn sample_counts(
    probabilities: [f64; 4],
    n: u64,
    seed: u64,
) -> Result<[u64; 4], StochasticError> {
    sample_counts_on_stream(probabilities, n, seed, 0)
}

pub fn sample_counts_on_stream(
    probabilities: [f64; 4],
    n: u64,
    seed: u64,
    stream: u64,
) -> Result<[u64; 4], StochasticError> {
    validate(probabilities)?;
    Ok(multinomial(&mut stream_rng(seed, stream), probabilities, n))
}

/// Outcome probabilities of the four analyzer combinations for one setting
/// pair, normalized by their sum.
pub fn outcome_probabilities(
    joint: &BiphotonState,
    settings: &ChshSettings,
    index: usize,
) -> Result<[f64; 4], StochasticError> {
    let (bt, br) = settings.pairs()[index];
    let terms = correlator_terms(joint, settings.arm(), bt, br)?;
    let total: f64 = terms.iter().sum();
    if !(total > 1e-300) {
        return Err(StochasticError::ZeroDenominator(index));
    }
    Ok(terms.map(|c| c / total))
}

/// Counts for setting pair `index` alone; identical to that row of the full table.
pub fn sample_setting(
    joint: &BiphotonState,
    settings: &ChshSettings,
    index: usize,
    n: u64,
    seed: u64,
) -> Result<[u64; 4], StochasticError> {
    let p = outcome_probabilities(joint, settings, index)?;
    Ok(multinomial(&mut stream_rng(seed, index as u64), p, n))
}

pub fn sample_table(
    joint: &BiphotonState,
    settings: &ChshSettings,
    n: u64,
    seed: u64,
) -> Result<CountTable, StochasticError> {
    let mut counts = [[0u64; 4]; 4];
    for (i, row) in counts.iter_mut().enumerate() {
        *row = sample_setting(joint, settings, i, n, seed)?;
    }
    Ok(CountTable {
        counts,
        pairs_per_setting: n,
        seed,
    })
}

/// `Ŝ` from sampled counts, with `Var(Ê) = (1 − Ê²)/N` per setting pair.
pub fn estimate_s(
    joint: &BiphotonState,
    settings: &ChshSettings,
    n: u64,
    seed: u64,
) -> Result<ChshEstimate, StochasticError> {
    if n < 4 {
        return Err(StochasticError::TooFewPairs(n));
    }
    let table = sample_table(joint, settings, n, seed)?;
    Ok(estimate_from_table(table))
}

pub fn estimate_from_table(table: CountTable) -> ChshEstimate {
    let n = table.pairs_per_setting as f64;
    let correlators: [f64; 4] = std::array::from_fn(|i| table.correlator(i));
    let correlator_stderr = correlators.map(|e| ((1.0 - e * e).max(0.0) / n).sqrt());
    let s_hat = correlators
        .iter()
        .zip(ChshSettings::SIGNS)
        .map(|(e, s)| s * e)
        .sum();
    let stderr = correlator_stderr.iter().map(|s| s * s).sum::<f64>().sqrt();
    ChshEstimate {
        s_hat,
        stderr,
        correlators,
        correlator_stderr,
        table,
    }
}
