//! Bell-measurement outcome distributions and seeded count sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::{depolarizing_probs, PauliProbabilities};
use crate::error::{Error, Result};
use crate::qcore::{tol, BellLabel, Pauli};

/// Index of the singlet outcome in a two-outcome distribution.
pub const SINGLET: usize = 0;
/// Index of the complementary outcome (1 − |ψ−⟩⟨ψ−|).
pub const REST: usize = 1;

/// Probabilities over a finite, ordered outcome set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution(Vec<f64>);

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty outcome set".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbabilities(format!("{p} is outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidProbabilities(format!("sum is {sum}, expected 1")));
        }
        Ok(OutcomeDistribution(probs))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Nonnegative counts over the same ordered outcome set as a distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts(Vec<u64>);

impl OutcomeCounts {
    pub fn new(counts: Vec<u64>) -> Self {
        OutcomeCounts(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Fixed total: N trials split across outcomes.
    Multinomial,
    /// Independent Poisson count per outcome with mean `shots_or_mean * p_k`.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub mode: SamplingMode,
    /// Total shots N (multinomial, rounded to the nearest integer) or mean
    /// total count (Poisson).
    pub shots_or_mean: f64,
    pub seed: u64,
}

impl SamplingConfig {
    pub fn new(mode: SamplingMode, shots_or_mean: f64, seed: u64) -> Result<Self> {
        if !(shots_or_mean.is_finite() && shots_or_mean >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "shot count must be finite and nonnegative, got {shots_or_mean}"
            )));
        }
        Ok(SamplingConfig { mode, shots_or_mean, seed })
    }

    pub fn multinomial(shots: u64, seed: u64) -> Self {
        SamplingConfig { mode: SamplingMode::Multinomial, shots_or_mean: shots as f64, seed }
    }

    pub fn poisson(mean: f64, seed: u64) -> Result<Self> {
        Self::new(SamplingMode::Poisson, mean, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SamplingConfig { seed, ..*self }
    }

    pub fn with_budget(&self, shots_or_mean: f64) -> Self {
        SamplingConfig { shots_or_mean, ..*self }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of counters into an independent sub-seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &k| splitmix64(acc ^ splitmix64(k.wrapping_add(0x5851_f42d_4c95_7f2d))))
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maps each Pauli index to the Bell state that (σ_i⊗I)|ψ−⟩ is proportional to.
pub fn bell_permutation() -> [BellLabel; 4] {
    [BellLabel::PsiMinus, BellLabel::PhiMinus, BellLabel::PhiPlus, BellLabel::PsiPlus]
}

pub fn bell_label_for(pauli: Pauli) -> BellLabel {
    bell_permutation()[pauli.index()]
}

/// Bell-outcome probabilities for the singlet sent through the channel,
/// indexed by [`BellLabel::ALL`].
pub fn bell_outcome_probs(probs: &PauliProbabilities) -> OutcomeDistribution {
    let mut out = vec![0.0; 4];
    for pauli in Pauli::ALL {
        out[bell_label_for(pauli).index()] = probs.get(pauli);
    }
    OutcomeDistribution(out)
}

/// Outcome probabilities of the coarse measurement {singlet, rest} for the
/// depolarizing channel with parameter `p`.
pub fn two_outcome_probs(p: f64) -> Result<OutcomeDistribution> {
    let probs = depolarizing_probs(p)?;
    let bell = bell_outcome_probs(&probs);
    let singlet = bell.0[BellLabel::PsiMinus.index()];
    let mut out = vec![0.0; 2];
    out[SINGLET] = singlet;
    out[REST] = 1.0 - singlet;
    Ok(OutcomeDistribution(out))
}

/// Draws counts for `dist`. Outcome k uses its own sub-stream derived from
/// `cfg.seed`, so results depend only on `(dist, cfg)`.
pub fn sample_counts(dist: &OutcomeDistribution, cfg: &SamplingConfig) -> OutcomeCounts {
    let probs = &dist.0;
    match cfg.mode {
        SamplingMode::Multinomial => {
            let shots = cfg.shots_or_mean.round() as u64;
            let mut counts = vec![0u64; probs.len()];
            let mut remaining = shots;
            let mut remaining_mass = 1.0;
            let last = probs.len() - 1;
            for (k, &pk) in probs.iter().enumerate() {
                if remaining == 0 {
                    break;
                }
                if k == last {
                    counts[k] = remaining;
                    break;
                }
                if pk <= 0.0 {
                    remaining_mass -= pk;
                    continue;
                }
                // all remaining mass sits on this outcome
                let q = if remaining_mass - pk <= tol::STRUCTURAL {
                    1.0
                } else {
                    (pk / remaining_mass).clamp(0.0, 1.0)
                };
                let draw = Binomial::new(remaining, q)
                    .expect("binomial probability clamped to [0, 1]")
                    .sample(&mut rng_for(derive_seed(cfg.seed, &[k as u64])));
                counts[k] = draw;
                remaining -= draw;
                remaining_mass -= pk;
            }
            OutcomeCounts(counts)
        }
        SamplingMode::Poisson => {
            let counts = probs
                .iter()
                .enumerate()
                .map(|(k, &pk)| {
                    let mean = cfg.shots_or_mean * pk;
                    if mean <= 0.0 {
                        return 0;
                    }
                    let draw: f64 = Poisson::new(mean)
                        .expect("positive finite Poisson mean")
                        .sample(&mut rng_for(derive_seed(cfg.seed, &[k as u64])));
                    draw as u64
                })
                .collect();
            OutcomeCounts(counts)
        }
    }
}
