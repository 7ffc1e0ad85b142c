//! Relative-frequency estimators of the channel parameters and the
//! Cramér-Rao bound they attain.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::channel::PauliProbabilities;
use crate::error::{Error, Result};
use crate::measurement::{bell_label_for, OutcomeCounts, REST, SINGLET};
use crate::qcore::{tol, Pauli};

/// Point estimate of the four Pauli probabilities from `total_counts` Bell
/// outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliEstimate {
    pub probs: PauliProbabilities,
    pub total_counts: u64,
}

/// Depolarizing-parameter estimate p̂ = N_ss / (N_ss + C_int), where C_int
/// counts singlet (interference) coincidences and N_ss the complementary
/// same-side events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcEstimate {
    pub p_hat: f64,
    pub n_ss: u64,
    pub c_int: u64,
}

/// Symmetric covariance over the noise parameters (p1, p2, p3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix3(Matrix3<f64>);

impl CovarianceMatrix3 {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let asym = (m - m.transpose()).amax();
        if asym > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("covariance not symmetric ({asym:e})")));
        }
        if let Some(d) = m.diagonal().iter().find(|&&d| d < 0.0) {
            return Err(Error::InvalidState(format!("negative variance {d}")));
        }
        Ok(CovarianceMatrix3(m))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CovarianceMatrix3(self.0 * factor)
    }
}

pub fn estimate_pauli(counts: &OutcomeCounts) -> Result<PauliEstimate> {
    let c = counts.counts();
    if c.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4 Bell outcomes".into(),
            actual: c.len().to_string(),
        });
    }
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptySample("no Bell outcomes recorded".into()));
    }
    let mut p = [0.0; 4];
    for pauli in Pauli::ALL {
        p[pauli.index()] = c[bell_label_for(pauli).index()] as f64 / total as f64;
    }
    Ok(PauliEstimate { probs: PauliProbabilities::new(p)?, total_counts: total })
}

pub fn estimate_dc(n_ss: u64, c_int: u64) -> Result<DcEstimate> {
    let total = n_ss + c_int;
    if total == 0 {
        return Err(Error::EmptySample("N_ss + C_int = 0".into()));
    }
    Ok(DcEstimate { p_hat: n_ss as f64 / total as f64, n_ss, c_int })
}

/// [`estimate_dc`] applied to two-outcome counts ordered (singlet, rest).
pub fn estimate_dc_from_counts(counts: &OutcomeCounts) -> Result<DcEstimate> {
    let c = counts.counts();
    if c.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2 outcomes".into(),
            actual: c.len().to_string(),
        });
    }
    estimate_dc(c[REST], c[SINGLET])
}

/// Inverse quantum Fisher information for a maximally entangled probe:
/// p_i(1 − p_i) on the diagonal, −p_i p_j off it.
pub fn min_covariance(probs: &PauliProbabilities) -> CovarianceMatrix3 {
    let q = probs.noise();
    CovarianceMatrix3(Matrix3::from_fn(|i, j| {
        if i == j {
            q[i] * (1.0 - q[i])
        } else {
            -q[i] * q[j]
        }
    }))
}

/// √(p(1 − p)/n), the smallest achievable standard deviation of p̂ from n
/// probes of the depolarizing channel.
pub fn dc_std_bound(p: f64, n: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange { name: "p", value: p });
    }
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be at least 1".into()));
    }
    Ok((p * (1.0 - p) / n as f64).sqrt())
}

/// Unbiased (n − 1) sample covariance of (p1, p2, p3) vectors.
pub fn empirical_covariance(samples: &[[f64; 3]]) -> Result<CovarianceMatrix3> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let mut mean = [0.0; 3];
    for s in samples {
        for k in 0..3 {
            mean[k] += s[k];
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = Matrix3::zeros();
    for s in samples {
        for i in 0..3 {
            for j in i..3 {
                cov[(i, j)] += (s[i] - mean[i]) * (s[j] - mean[j]);
            }
        }
    }
    for i in 0..3 {
        for j in i..3 {
            cov[(i, j)] /= (n - 1) as f64;
            cov[(j, i)] = cov[(i, j)];
        }
    }
    Ok(CovarianceMatrix3(cov))
}

/// Sample mean and (n − 1) standard deviation.
pub fn mean_and_std(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok((mean, var.sqrt()))
}
