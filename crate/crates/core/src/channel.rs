//! The qubit Pauli channel ρ ↦ Σ p_i σ_i ρ σ_i, its depolarizing special case,
//! the switching-time parameterization and process (chi) matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{hermiticity_error, pauli_on_first, tol, ComplexMatrix, DensityMatrix, Pauli};

/// Probabilities (p0, p1, p2, p3) of applying I, σ_x, σ_y, σ_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct PauliProbabilities([f64; 4]);

impl PauliProbabilities {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        for (i, &pi) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&pi) {
                return Err(Error::InvalidProbabilities(format!("p{i} = {pi} is outside [0, 1]")));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidProbabilities(format!("sum is {sum}, expected 1")));
        }
        Ok(PauliProbabilities(p))
    }

    pub fn identity() -> Self {
        PauliProbabilities([1.0, 0.0, 0.0, 0.0])
    }

    pub fn get(&self, pauli: Pauli) -> f64 {
        self.0[pauli.index()]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    /// The three noise parameters (p1, p2, p3).
    pub fn noise(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// Convex combination `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::ParameterOutOfRange { name: "weight", value: weight });
        }
        let mut p = [0.0; 4];
        for (i, pi) in p.iter_mut().enumerate() {
            *pi = weight * self.0[i] + (1.0 - weight) * other.0[i];
        }
        Self::new(p)
    }
}

impl TryFrom<[f64; 4]> for PauliProbabilities {
    type Error = Error;

    fn try_from(p: [f64; 4]) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PauliProbabilities> for [f64; 4] {
    fn from(p: PauliProbabilities) -> Self {
        p.0
    }
}

/// Activation times of σ_x, σ_y, σ_z within one switching cycle of length
/// `period`. Only the ratios t_i / period matter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    #[serde(rename = "times")]
    t: [f64; 3],
    period: f64,
}

impl TimingConfig {
    pub fn new(t1: f64, t2: f64, t3: f64, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidTiming(format!("period must be positive, got {period}")));
        }
        for (i, &t) in [t1, t2, t3].iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTiming(format!("t{} = {t} must be nonnegative", i + 1)));
            }
        }
        let delta = t1 + t2 + t3;
        if delta > period * (1.0 + tol::STRUCTURAL) {
            return Err(Error::InvalidTiming(format!(
                "t1 + t2 + t3 = {delta} exceeds period {period}"
            )));
        }
        Ok(TimingConfig { t: [t1, t2, t3], period })
    }

    pub fn times(&self) -> [f64; 3] {
        self.t
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// δ, the total time any Pauli operator is active.
    pub fn active_time(&self) -> f64 {
        self.t.iter().sum()
    }
}

/// p_i = t_i / T and p_0 = 1 − δ / T.
pub fn timing_to_probs(cfg: &TimingConfig) -> PauliProbabilities {
    let [t1, t2, t3] = cfg.t;
    let period = cfg.period;
    let p0 = (1.0 - cfg.active_time() / period).max(0.0);
    PauliProbabilities([p0, t1 / period, t2 / period, t3 / period])
}

/// Isotropic noise: (1 − p, p/3, p/3, p/3).
pub fn depolarizing_probs(p: f64) -> Result<PauliProbabilities> {
    check_unit("p", p)?;
    let third = p / 3.0;
    PauliProbabilities::new([1.0 - p, third, third, third])
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}

fn apply_conjugations(probs: &PauliProbabilities, rho: &ComplexMatrix, op: impl Fn(Pauli) -> ComplexMatrix) -> ComplexMatrix {
    let n = rho.nrows();
    Pauli::ALL
        .iter()
        .filter(|&&s| probs.get(s) != 0.0)
        .fold(ComplexMatrix::zeros(n, n), |acc, &s| {
            let u = op(s);
            acc + (&u * rho * &u) * Complex64::new(probs.get(s), 0.0)
        })
}

fn expect_dim(rho: &DensityMatrix, dim: usize) -> Result<()> {
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: format!("{dim}x{dim}"),
            actual: format!("{0}x{0}", rho.dim()),
        });
    }
    Ok(())
}

/// Σ p_i σ_i ρ σ_i on a single qubit.
pub fn apply_pauli_channel(probs: &PauliProbabilities, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_dim(rho, 2)?;
    let out = apply_conjugations(probs, rho.matrix(), Pauli::matrix);
    Ok(DensityMatrix::from_trusted(out))
}

/// Σ p_i (σ_i⊗I) ρ (σ_i⊗I): the channel on qubit A of a two-qubit state,
/// qubit B untouched.
pub fn apply_channel_one_side(probs: &PauliProbabilities, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_dim(rho, 4)?;
    let out = apply_conjugations(probs, rho.matrix(), pauli_on_first);
    Ok(DensityMatrix::from_trusted(out))
}

/// Process matrix χ_ij in the operator basis (I, σ_x, σ_y, σ_z), normalized
/// to unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix(ComplexMatrix);

impl ChiMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4".into(),
                actual: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let herm_err = hermiticity_error(&m);
        if herm_err > tol::NUMERIC {
            return Err(Error::InvalidState(format!(
                "chi matrix not Hermitian (deviation {herm_err:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::NUMERIC || tr.im.abs() > tol::NUMERIC {
            return Err(Error::InvalidState(format!("chi matrix trace {tr} != 1")));
        }
        Ok(ChiMatrix(m))
    }

    pub fn diagonal(entries: [f64; 4]) -> Result<Self> {
        let m = ComplexMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                Complex64::new(entries[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Real parts of the diagonal, i.e. the Pauli weights.
    pub fn diagonal_weights(&self) -> [f64; 4] {
        [self.0[(0, 0)].re, self.0[(1, 1)].re, self.0[(2, 2)].re, self.0[(3, 3)].re]
    }
}

/// diag(1 − p, p/3, p/3, p/3)
pub fn chi_theoretical_dc(p: f64) -> Result<ChiMatrix> {
    check_unit("p", p)?;
    let third = p / 3.0;
    ChiMatrix::diagonal([1.0 - p, third, third, third])
}

/// A Pauli channel has a diagonal chi matrix carrying its probabilities.
pub fn chi_of_pauli(probs: &PauliProbabilities) -> ChiMatrix {
    ChiMatrix::diagonal(probs.as_array()).expect("valid probabilities give a valid chi matrix")
}
