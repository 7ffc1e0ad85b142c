//! Dense complex matrices, one- and two-qubit states, the Bell basis and the
//! Uhlmann fidelity.
//!
//! Two-qubit vectors use the computational order |00⟩, |01⟩, |10⟩, |11⟩ with
//! qubit A (the one sent through the channel) as the left tensor factor.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerances shared by every module.
pub mod tol {
    /// Structural checks: normalization, Hermiticity, trace.
    pub const STRUCTURAL: f64 = 1e-12;
    /// Reconstruction and positivity checks.
    pub const NUMERIC: f64 = 1e-9;
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Index of a single-qubit Pauli operator: σ_0 = identity, then σ_x, σ_y, σ_z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> ComplexMatrix {
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        }
    }
}

/// The four Bell states. [`BellLabel::ALL`] is the canonical order used
/// wherever Bell outcomes are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    PsiMinus,
    PhiMinus,
    PhiPlus,
    PsiPlus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiMinus,
        BellLabel::PhiMinus,
        BellLabel::PhiPlus,
        BellLabel::PsiPlus,
    ];

    /// Position in [`BellLabel::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PsiMinus => "psi-",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PhiPlus => "phi+",
            BellLabel::PsiPlus => "psi+",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A normalized state vector of one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<Complex64>);

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        if n != 2 && n != 4 {
            return Err(Error::DimensionMismatch {
                expected: "2 or 4 amplitudes".into(),
                actual: n.to_string(),
            });
        }
        let v = DVector::from_vec(amplitudes);
        let norm2 = v.norm_squared();
        if (norm2 - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("squared norm {norm2} != 1")));
        }
        Ok(PureState(v))
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        let m = &self.0 * self.0.adjoint();
        DensityMatrix(hermitize(&m))
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square(&m)?;
        let n = m.nrows();
        if n != 2 && n != 4 {
            return Err(Error::DimensionMismatch {
                expected: "2x2 or 4x4".into(),
                actual: format!("{n}x{n}"),
            });
        }
        let herm_err = hermiticity_error(&m);
        if herm_err > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm_err:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let (evals, _) = hermitian_eigen(&m);
        let min = evals.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol::NUMERIC {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix(ComplexMatrix::identity(dim, dim) * scale)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// ⟨ψ|ρ|ψ⟩ for a pure state of matching dimension.
    pub fn expectation(&self, state: &PureState) -> f64 {
        let v = state.amplitudes();
        v.dotc(&(&self.0 * v)).re
    }

    /// Wraps a matrix the caller has already produced from valid states by a
    /// trace- and positivity-preserving map.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        DensityMatrix(hermitize(&m))
    }
}

pub fn bell_state(label: BellLabel) -> PureState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let amplitudes = match label {
        BellLabel::PsiMinus => [ZERO, h, -h, ZERO],
        BellLabel::PsiPlus => [ZERO, h, h, ZERO],
        BellLabel::PhiMinus => [h, ZERO, ZERO, -h],
        BellLabel::PhiPlus => [h, ZERO, ZERO, h],
    };
    PureState(DVector::from_row_slice(&amplitudes))
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Pauli operator acting on qubit A only: σ ⊗ I.
pub fn pauli_on_first(p: Pauli) -> ComplexMatrix {
    tensor_product(&p.matrix(), &ComplexMatrix::identity(2, 2))
}

/// (M + M†)/2
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest entrywise deviation |M_ij − conj(M_ji)|.
pub fn hermiticity_error(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// V diag(f(λ)) V† over the Hermitian eigendecomposition.
fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let diag = DVector::from_iterator(values.len(), values.iter().map(|&l| Complex64::new(f(l), 0.0)));
    let scaled = ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| vectors[(r, c)] * diag[c]);
    hermitize(&(scaled * vectors.adjoint()))
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative eigenvalues from round-off are clipped to zero.
pub fn hermitian_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    spectral_map(m, |l| l.max(0.0).sqrt())
}

/// Clips the spectrum of a Hermitian matrix at zero and rescales to unit trace.
pub fn psd_project(m: &ComplexMatrix) -> Result<DensityMatrix> {
    check_square(m)?;
    let herm_err = hermiticity_error(m);
    if herm_err > tol::NUMERIC {
        return Err(Error::InvalidState(format!(
            "not Hermitian (deviation {herm_err:e})"
        )));
    }
    let (values, _) = hermitian_eigen(m);
    let trace_before = m.trace();
    if values.iter().all(|&l| l >= 0.0)
        && (trace_before.re - 1.0).abs() <= tol::STRUCTURAL
        && trace_before.im.abs() <= tol::STRUCTURAL
    {
        return DensityMatrix::new(hermitize(m));
    }
    let clipped_trace: f64 = values.iter().map(|&l| l.max(0.0)).sum();
    if clipped_trace <= tol::STRUCTURAL {
        return Err(Error::DegenerateMatrix(clipped_trace));
    }
    let projected = spectral_map(m, |l| l.max(0.0) / clipped_trace);
    DensityMatrix::new(projected)
}

/// F(a, b) = (Tr √(√a b √a))².
pub fn uhlmann_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", a.dim()),
            actual: format!("{0}x{0}", b.dim()),
        });
    }
    let sa = hermitian_sqrt(a.matrix());
    Ok(fidelity_with_sqrt(&sa, b.matrix()))
}

/// Fidelity when √a is already known.
pub(crate) fn fidelity_with_sqrt(sqrt_a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let inner = sqrt_a * b * sqrt_a;
    let (values, _) = hermitian_eigen(&inner);
    let root_trace: f64 = values.iter().map(|&l| l.max(0.0).sqrt()).sum();
    (root_trace * root_trace).clamp(0.0, 1.0)
}

/// ½ Σ |λ_i(a − b)|
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (values, _) = hermitian_eigen(&(a - b));
    0.5 * values.iter().map(|l| l.abs()).sum::<f64>()
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch {
            expected: "non-empty square matrix".into(),
            actual: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag(entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| c(x)),
        ))
    }

    fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_matrix(entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, col| {
            let k = 2 * (2 * r + col);
            Complex64::new(entries[k], entries[k + 1])
        })
    }

    fn random_density(entries: &[f64], dim: usize) -> DensityMatrix {
        // G G† / Tr(G G†) is always a valid state
        let g = ComplexMatrix::from_fn(dim, dim, |r, col| {
            let k = 2 * (dim * r + col);
            Complex64::new(entries[k], entries[k + 1])
        });
        let gg = &g * g.adjoint();
        let tr = gg.trace().re;
        DensityMatrix::new(hermitize(&(gg / c(tr)))).unwrap()
    }

    #[test]
    fn bell_amplitudes() {
        let h = FRAC_1_SQRT_2;
        let psi_minus = bell_state(BellLabel::PsiMinus);
        assert_eq!(psi_minus.amplitudes().as_slice(), &[c(0.0), c(h), c(-h), c(0.0)]);
        let phi_plus = bell_state(BellLabel::PhiPlus);
        assert_eq!(phi_plus.amplitudes().as_slice(), &[c(h), c(0.0), c(0.0), c(h)]);
        let psi_plus = bell_state(BellLabel::PsiPlus);
        assert_eq!(psi_plus.amplitudes().as_slice(), &[c(0.0), c(h), c(h), c(0.0)]);
    }

    #[test]
    fn bell_states_orthonormal() {
        for a in BellLabel::ALL {
            for b in BellLabel::ALL {
                let overlap = bell_state(a).inner(&bell_state(b));
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((overlap - c(expected)).norm() < 1e-12, "{a} {b}");
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        let i2 = ComplexMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4, 4));

        let xi = tensor_product(&Pauli::X.matrix(), &i2);
        // rows (0,1) <-> (2,3)
        let expected = ComplexMatrix::from_fn(4, 4, |r, col| c(if (r + 2) % 4 == col { 1.0 } else { 0.0 }));
        assert_eq!(xi, expected);

        let zz = tensor_product(&Pauli::Z.matrix(), &Pauli::Z.matrix());
        assert_eq!(zz, diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn psd_project_examples() {
        let valid = diag(&[0.5, 0.5]);
        assert_eq!(psd_project(&valid).unwrap().matrix(), &valid);

        let clipped = psd_project(&diag(&[1.1, -0.1])).unwrap();
        assert!(max_abs_diff(clipped.matrix(), &diag(&[1.0, 0.0])) < 1e-12);

        let zero = ComplexMatrix::zeros(2, 2);
        assert!(matches!(psd_project(&zero), Err(Error::DegenerateMatrix(_))));
    }

    #[test]
    fn psd_project_rejects_non_hermitian() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1);
        assert!(matches!(psd_project(&m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn fidelity_examples() {
        let rho = random_density(&[0.3, -0.2, 0.5, 0.1, 0.7, 0.0, -0.4, 0.9], 2);
        assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);

        let zero = DensityMatrix::new(diag(&[1.0, 0.0])).unwrap();
        let one = DensityMatrix::new(diag(&[0.0, 1.0])).unwrap();
        assert!(uhlmann_fidelity(&zero, &one).unwrap().abs() < 1e-12);

        // commuting case: (Σ √(a_i b_i))² = (√0.4)² = 0.4
        let a = DensityMatrix::new(diag(&[0.4, 0.2, 0.2, 0.2])).unwrap();
        let b = DensityMatrix::new(diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((uhlmann_fidelity(&a, &b).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            uhlmann_fidelity(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(diag(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(diag(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(diag(&[1.0, 0.0, 0.0])).is_err());
        assert!(PureState::new(vec![c(1.0), c(1.0)]).is_err());
    }

    #[test]
    fn sqrt_squares_back() {
        let rho = random_density(&[0.1, 0.8, -0.3, 0.2, 0.5, -0.5, 0.9, 0.3], 2);
        let s = hermitian_sqrt(rho.matrix());
        assert!(max_abs_diff(&(&s * &s), rho.matrix()) < 1e-12);
    }

    proptest! {
        #[test]
        fn mixed_product_property(
            a in prop::collection::vec(-1.0f64..1.0, 8),
            b in prop::collection::vec(-1.0f64..1.0, 8),
            cc in prop::collection::vec(-1.0f64..1.0, 8),
            d in prop::collection::vec(-1.0f64..1.0, 8),
        ) {
            let (a, b, cc, d) = (random_matrix(&a), random_matrix(&b), random_matrix(&cc), random_matrix(&d));
            let lhs = tensor_product(&a, &b) * tensor_product(&cc, &d);
            let rhs = tensor_product(&(&a * &cc), &(&b * &d));
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }

        #[test]
        fn kronecker_bilinear(
            a in prop::collection::vec(-1.0f64..1.0, 8),
            a2 in prop::collection::vec(-1.0f64..1.0, 8),
            b in prop::collection::vec(-1.0f64..1.0, 8),
            s in -2.0f64..2.0,
        ) {
            let (a, a2, b) = (random_matrix(&a), random_matrix(&a2), random_matrix(&b));
            let lhs = tensor_product(&(&a * c(s) + &a2), &b);
            let rhs = tensor_product(&a, &b) * c(s) + tensor_product(&a2, &b);
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }

        #[test]
        fn fidelity_symmetric(
            x in prop::collection::vec(-1.0f64..1.0, 32),
            y in prop::collection::vec(-1.0f64..1.0, 32),
        ) {
            let a = random_density(&x, 4);
            let b = random_density(&y, 4);
            let fab = uhlmann_fidelity(&a, &b).unwrap();
            let fba = uhlmann_fidelity(&b, &a).unwrap();
            prop_assert!((fab - fba).abs() < 1e-10);
            prop_assert!((0.0..=1.0).contains(&fab));
        }

        #[test]
        fn psd_project_idempotent(
            x in prop::collection::vec(-1.0f64..1.0, 32),
            shift in -0.3f64..0.3,
        ) {
            // perturb a valid state so that some eigenvalues go negative
            let rho = random_density(&x, 4);
            let m = rho.matrix() + ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(shift), c(-shift), c(0.0), c(0.0)]));
            if let Ok(once) = psd_project(&m) {
                let twice = psd_project(once.matrix()).unwrap();
                prop_assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
            }
        }
    }
}
