//! Python bindings for `chanest-core`.
//!
//! Probability vectors are plain lists ordered (I, X, Y, Z); Bell outcomes are
//! ordered as returned by `bell_labels()`. Matrices are lists of rows of
//! Python complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use chanest_core::harness::{self, Experiment, ExperimentConfig};
use chanest_core::{channel, estimation, measurement, qcore, tomography};
use chanest_core::{BellLabel, ChiMatrix, ComplexMatrix, Error, PauliProbabilities, SamplingConfig, SamplingMode};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        ref e if e.is_config_error() => PyValueError::new_err(err.to_string()),
        Error::DimensionMismatch { .. } | Error::InvalidState(_) | Error::EmptySample(_) => {
            PyValueError::new_err(err.to_string())
        }
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn parse_bell(label: &str) -> PyResult<BellLabel> {
    BellLabel::ALL
        .into_iter()
        .find(|b| b.name() == label)
        .ok_or_else(|| PyValueError::new_err(format!("unknown Bell label {label:?}; expected one of psi-, phi-, phi+, psi+")))
}

fn parse_mode(mode: &str) -> PyResult<SamplingMode> {
    match mode.to_ascii_lowercase().as_str() {
        "multinomial" => Ok(SamplingMode::Multinomial),
        "poisson" => Ok(SamplingMode::Poisson),
        other => Err(PyValueError::new_err(format!("unknown sampling mode {other:?}"))),
    }
}

fn probs(p: [f64; 4]) -> PyResult<PauliProbabilities> {
    PauliProbabilities::new(p).map_err(to_py)
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

fn covariance_rows(cov: &estimation::CovarianceMatrix3) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = cov.get(i, j);
        }
    }
    out
}

/// Bell outcome labels in the order used for every Bell-indexed list.
#[pyfunction]
fn bell_labels() -> Vec<&'static str> {
    BellLabel::ALL.iter().map(|b| b.name()).collect()
}

/// Amplitudes of a Bell state over |00>, |01>, |10>, |11>.
#[pyfunction]
fn bell_state(label: &str) -> PyResult<Vec<Complex64>> {
    Ok(qcore::bell_state(parse_bell(label)?).amplitudes().iter().copied().collect())
}

#[pyfunction]
fn depolarizing_probs(p: f64) -> PyResult<[f64; 4]> {
    Ok(channel::depolarizing_probs(p).map_err(to_py)?.as_array())
}

/// Pauli probabilities (p0, p1, p2, p3) from activation times and period.
#[pyfunction]
fn timing_to_probs(t1: f64, t2: f64, t3: f64, period: f64) -> PyResult<[f64; 4]> {
    let cfg = channel::TimingConfig::new(t1, t2, t3, period).map_err(to_py)?;
    Ok(channel::timing_to_probs(&cfg).as_array())
}

/// Output state of the singlet after the channel acts on qubit A.
#[pyfunction]
fn singlet_output(p: [f64; 4]) -> PyResult<Vec<Vec<Complex64>>> {
    let singlet = qcore::bell_state(BellLabel::PsiMinus).density_matrix();
    let out = channel::apply_channel_one_side(&probs(p)?, &singlet).map_err(to_py)?;
    Ok(matrix_to_rows(out.matrix()))
}

#[pyfunction]
fn bell_outcome_probs(p: [f64; 4]) -> PyResult<Vec<f64>> {
    Ok(measurement::bell_outcome_probs(&probs(p)?).probabilities().to_vec())
}

/// (singlet, rest) probabilities for the depolarizing channel.
#[pyfunction]
fn two_outcome_probs(p: f64) -> PyResult<Vec<f64>> {
    Ok(measurement::two_outcome_probs(p).map_err(to_py)?.probabilities().to_vec())
}

#[pyfunction]
#[pyo3(signature = (dist, shots_or_mean, seed, mode = "multinomial"))]
fn sample_counts(dist: Vec<f64>, shots_or_mean: f64, seed: u64, mode: &str) -> PyResult<Vec<u64>> {
    let dist = measurement::OutcomeDistribution::new(dist).map_err(to_py)?;
    let cfg = SamplingConfig::new(parse_mode(mode)?, shots_or_mean, seed).map_err(to_py)?;
    Ok(measurement::sample_counts(&dist, &cfg).counts().to_vec())
}

/// Pauli probabilities estimated from Bell-outcome counts.
#[pyfunction]
fn estimate_pauli(counts: Vec<u64>) -> PyResult<[f64; 4]> {
    let est = estimation::estimate_pauli(&measurement::OutcomeCounts::new(counts)).map_err(to_py)?;
    Ok(est.probs.as_array())
}

#[pyfunction]
fn estimate_dc(n_ss: u64, c_int: u64) -> PyResult<f64> {
    Ok(estimation::estimate_dc(n_ss, c_int).map_err(to_py)?.p_hat)
}

#[pyfunction]
fn min_covariance(p: [f64; 4]) -> PyResult<[[f64; 3]; 3]> {
    Ok(covariance_rows(&estimation::min_covariance(&probs(p)?)))
}

#[pyfunction]
fn empirical_covariance(samples: Vec<[f64; 3]>) -> PyResult<[[f64; 3]; 3]> {
    Ok(covariance_rows(&estimation::empirical_covariance(&samples).map_err(to_py)?))
}

#[pyfunction]
fn dc_std_bound(p: f64, n: u64) -> PyResult<f64> {
    estimation::dc_std_bound(p, n).map_err(to_py)
}

#[pyfunction]
fn uhlmann_fidelity(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let a = qcore::DensityMatrix::new(matrix_from_rows(a)?).map_err(to_py)?;
    let b = qcore::DensityMatrix::new(matrix_from_rows(b)?).map_err(to_py)?;
    qcore::uhlmann_fidelity(&a, &b).map_err(to_py)
}

#[pyfunction]
fn chi_theoretical_dc(p: f64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to_rows(channel::chi_theoretical_dc(p).map_err(to_py)?.matrix()))
}

/// (p_fit, fidelity) maximizing the fidelity to the depolarizing family.
#[pyfunction]
fn fit_p_fidelity(chi: Vec<Vec<Complex64>>) -> PyResult<(f64, f64)> {
    let chi = ChiMatrix::new(matrix_from_rows(chi)?).map_err(to_py)?;
    tomography::fit_p_fidelity(&chi).map_err(to_py)
}

#[pyclass(name = "AaqptResult", frozen, get_all)]
struct PyAaqptResult {
    p_fit: f64,
    fidelity_at_fit: f64,
    chi: Vec<Vec<Complex64>>,
}

#[pymethods]
impl PyAaqptResult {
    fn __repr__(&self) -> String {
        format!("AaqptResult(p_fit={}, fidelity_at_fit={})", self.p_fit, self.fidelity_at_fit)
    }
}

/// Runs process tomography on the depolarizing channel. `counts=None` uses
/// exact outcome probabilities.
#[pyfunction]
#[pyo3(signature = (p_true, counts = None, seed = 0, mode = "poisson", input = "psi-"))]
fn aaqpt(p_true: f64, counts: Option<f64>, seed: u64, mode: &str, input: &str) -> PyResult<PyAaqptResult> {
    let cfg = counts
        .map(|c| SamplingConfig::new(parse_mode(mode)?, c, seed).map_err(to_py))
        .transpose()?;
    let result = tomography::aaqpt_pipeline_with_input(p_true, parse_bell(input)?, cfg.as_ref()).map_err(to_py)?;
    Ok(PyAaqptResult {
        p_fit: result.p_fit,
        fidelity_at_fit: result.fidelity_at_fit,
        chi: matrix_to_rows(result.chi_exp.matrix()),
    })
}

/// Runs a Monte Carlo experiment ("optimal_dc", "aaqpt" or "compare") and
/// returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (experiment, p_values, counts, trials = harness::DEFAULT_TRIALS, seed = 0, mode = None))]
fn run_experiment(
    py: Python<'_>,
    experiment: &str,
    p_values: Vec<f64>,
    counts: f64,
    trials: usize,
    seed: u64,
    mode: Option<&str>,
) -> PyResult<String> {
    let experiment = match experiment {
        "optimal_dc" => Experiment::OptimalDc,
        "aaqpt" => Experiment::Aaqpt,
        "compare" => Experiment::Compare,
        other => return Err(PyValueError::new_err(format!("unknown experiment {other:?}"))),
    };
    let mut cfg = ExperimentConfig::new(experiment, p_values, counts, seed).with_trials(trials);
    if let Some(mode) = mode {
        cfg.mode = parse_mode(mode)?;
    }
    let report = py.detach(|| harness::run_montecarlo(&cfg)).map_err(to_py)?;
    harness::report_to_json(&report).map_err(to_py)
}

#[pymodule]
fn chanest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyAaqptResult>()?;
    m.add_function(wrap_pyfunction!(bell_labels, m)?)?;
    m.add_function(wrap_pyfunction!(bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(depolarizing_probs, m)?)?;
    m.add_function(wrap_pyfunction!(timing_to_probs, m)?)?;
    m.add_function(wrap_pyfunction!(singlet_output, m)?)?;
    m.add_function(wrap_pyfunction!(bell_outcome_probs, m)?)?;
    m.add_function(wrap_pyfunction!(two_outcome_probs, m)?)?;
    m.add_function(wrap_pyfunction!(sample_counts, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_pauli, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_dc, m)?)?;
    m.add_function(wrap_pyfunction!(min_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(dc_std_bound, m)?)?;
    m.add_function(wrap_pyfunction!(uhlmann_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(chi_theoretical_dc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_p_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(aaqpt, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
