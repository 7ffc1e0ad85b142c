//! Estimation of Pauli noise channels acting on one half of a Bell pair.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: small dense complex linear algebra, Bell states, fidelity.
//! - [`channel`]: the Pauli channel family, its depolarizing special case and
//!   process (chi) matrices.
//! - [`measurement`]: Bell-measurement outcome distributions and seeded count
//!   sampling (multinomial or Poissonian).
//! - [`estimation`]: relative-frequency estimators and the Cramér-Rao bound.
//! - [`tomography`]: ancilla-assisted process tomography as a baseline.
//! - [`harness`]: Monte Carlo orchestration and report emission, used by the
//!   `chanest` command-line tool.

pub mod channel;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod measurement;
pub mod qcore;
pub mod tomography;

pub use channel::{ChiMatrix, PauliProbabilities, TimingConfig};
pub use error::{Error, Result};
pub use estimation::{CovarianceMatrix3, DcEstimate, PauliEstimate};
pub use measurement::{OutcomeCounts, OutcomeDistribution, SamplingConfig, SamplingMode};
pub use qcore::{BellLabel, ComplexMatrix, DensityMatrix, PureState};
pub use tomography::{AaqptResult, TomographyCounts, TomographySettings};
