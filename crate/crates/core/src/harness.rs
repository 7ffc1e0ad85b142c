//! Monte Carlo experiments comparing the optimal Bell-measurement estimator
//! with process tomography, and the CSV/JSON reports they produce.
//!
//! Every trial draws from a seed derived from (master seed, estimator tag,
//! budget rung, p index, trial index), so reports do not depend on how trials
//! are scheduled.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{timing_to_probs, TimingConfig};
use crate::error::{Error, Result};
use crate::estimation::{dc_std_bound, estimate_dc_from_counts, mean_and_std};
use crate::measurement::{bell_label_for, bell_outcome_probs, derive_seed, sample_counts, two_outcome_probs};
use crate::measurement::{SamplingConfig, SamplingMode};
use crate::qcore::Pauli;
use crate::tomography::aaqpt_pipeline;

pub const VERSION_TAG: &str = concat!("chanest-core/", env!("CARGO_PKG_VERSION"));
pub const DEFAULT_TRIALS: usize = 100;
/// Budget multiples at which tomography is re-run in a comparison.
pub const COMPARISON_LADDER: [u32; 3] = [1, 10, 100];
/// Tomography "matches" the optimal protocol once its std is within this
/// factor of the optimal std.
pub const CROSSOVER_FACTOR: f64 = 1.2;
pub const CSV_HEADER: &str = "p_true,estimator,counts,trials,mean,std,bound,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    BellProbs,
    OptimalDc,
    Aaqpt,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Optimal,
    Aaqpt,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Optimal => "optimal",
            Estimator::Aaqpt => "aaqpt",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Estimator::Optimal => 1,
            Estimator::Aaqpt => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub p_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<TimingConfig>,
    pub trials: usize,
    /// Total counts per trial (shots, or mean total for Poisson sampling).
    pub counts: f64,
    pub mode: SamplingMode,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, p_values: Vec<f64>, counts: f64, seed: u64) -> Self {
        let mode = match experiment {
            Experiment::OptimalDc => SamplingMode::Multinomial,
            _ => SamplingMode::Poisson,
        };
        ExperimentConfig {
            experiment,
            p_values,
            timings: Vec::new(),
            trials: DEFAULT_TRIALS,
            counts,
            mode,
            seed,
            output_path: None,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment == Experiment::BellProbs {
            if self.timings.is_empty() {
                return Err(Error::InvalidConfig("no timing configuration given".into()));
            }
            return Ok(());
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidConfig("no p values given".into()));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::ParameterOutOfRange { name: "p", value: *p });
        }
        if self.trials < 2 {
            return Err(Error::InvalidConfig(format!(
                "at least 2 trials are needed for a standard deviation, got {}",
                self.trials
            )));
        }
        if !(self.counts.is_finite() && self.counts >= 1.0) {
            return Err(Error::InvalidConfig(format!("counts must be at least 1, got {}", self.counts)));
        }
        Ok(())
    }
}

/// Aggregate over the trials of one (p, estimator, budget) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p_true: f64,
    pub estimator: Estimator,
    pub counts: f64,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    /// √(p(1 − p)/counts)
    pub bound: f64,
    pub estimates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub p_true: f64,
    pub counts: f64,
    pub optimal_std: f64,
    /// AAQPT std at 1× budget divided by the optimal std.
    pub std_ratio: f64,
    /// Smallest ladder multiple at which AAQPT std ≤ 1.2 × optimal std.
    pub crossover_multiple: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<Comparison>,
}

impl MonteCarloReport {
    pub fn empty(config: ExperimentConfig) -> Self {
        MonteCarloReport {
            version: VERSION_TAG.to_string(),
            seed: config.seed,
            config,
            rows: Vec::new(),
            comparisons: Vec::new(),
        }
    }

    pub fn row(&self, p_true: f64, estimator: Estimator, counts: f64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.p_true == p_true && r.estimator == estimator && r.counts == counts)
    }
}

fn single_trial(estimator: Estimator, p: f64, sampling: &SamplingConfig) -> Result<f64> {
    match estimator {
        Estimator::Optimal => {
            let counts = sample_counts(&two_outcome_probs(p)?, sampling);
            Ok(estimate_dc_from_counts(&counts)?.p_hat)
        }
        Estimator::Aaqpt => Ok(aaqpt_pipeline(p, sampling)?.p_fit),
    }
}

/// Runs `trials` estimations of one cell. `path` identifies the cell for
/// seed derivation.
fn run_cell(
    cfg: &ExperimentConfig,
    estimator: Estimator,
    p: f64,
    counts: f64,
    path: [u64; 3],
    exec: Execution,
) -> Result<ReportRow> {
    let base = SamplingConfig::new(cfg.mode, counts, cfg.seed)?;
    let trial = |t: usize| {
        let seed = derive_seed(cfg.seed, &[path[0], path[1], path[2], t as u64]);
        single_trial(estimator, p, &base.with_seed(seed))
    };
    let estimates: Vec<f64> = match exec {
        Execution::Sequential => (0..cfg.trials).map(trial).collect::<Result<_>>()?,
        Execution::Parallel => (0..cfg.trials).into_par_iter().map(trial).collect::<Result<_>>()?,
    };
    let (mean, std) = mean_and_std(&estimates)?;
    Ok(ReportRow {
        p_true: p,
        estimator,
        counts,
        trials: cfg.trials,
        mean,
        std,
        bound: dc_std_bound(p, counts.round() as u64)?,
        estimates,
    })
}

/// p-values in ascending order, each with its position in the config.
fn sorted_p_values(cfg: &ExperimentConfig) -> Vec<(usize, f64)> {
    let mut ps: Vec<(usize, f64)> = cfg.p_values.iter().copied().enumerate().collect();
    ps.sort_by(|a, b| a.1.total_cmp(&b.1));
    ps
}

pub fn run_montecarlo(cfg: &ExperimentConfig) -> Result<MonteCarloReport> {
    run_montecarlo_with(cfg, Execution::Parallel)
}

pub fn run_montecarlo_with(cfg: &ExperimentConfig, exec: Execution) -> Result<MonteCarloReport> {
    cfg.validate()?;
    let estimator = match cfg.experiment {
        Experiment::OptimalDc => Estimator::Optimal,
        Experiment::Aaqpt => Estimator::Aaqpt,
        Experiment::Compare => return run_comparison_with(cfg, exec),
        Experiment::BellProbs => {
            return Err(Error::InvalidConfig("bell-probs is not a Monte Carlo experiment".into()))
        }
    };
    let mut report = MonteCarloReport::empty(cfg.clone());
    for (idx, p) in sorted_p_values(cfg) {
        let row = run_cell(cfg, estimator, p, cfg.counts, [estimator.tag(), 0, idx as u64], exec)?;
        report.rows.push(row);
    }
    Ok(report)
}

pub fn run_comparison(cfg: &ExperimentConfig) -> Result<MonteCarloReport> {
    run_comparison_with(cfg, Execution::Parallel)
}

pub fn run_comparison_with(cfg: &ExperimentConfig, exec: Execution) -> Result<MonteCarloReport> {
    if cfg.experiment != Experiment::Compare {
        return Err(Error::InvalidConfig(format!(
            "comparison requires the compare experiment, got {:?}",
            cfg.experiment
        )));
    }
    cfg.validate()?;
    let mut report = MonteCarloReport::empty(cfg.clone());
    for (idx, p) in sorted_p_values(cfg) {
        let optimal = run_cell(cfg, Estimator::Optimal, p, cfg.counts, [Estimator::Optimal.tag(), 1, idx as u64], exec)?;
        let mut crossover = None;
        let mut ratio = f64::NAN;
        let mut rows = Vec::with_capacity(COMPARISON_LADDER.len());
        for multiple in COMPARISON_LADDER {
            let row = run_cell(
                cfg,
                Estimator::Aaqpt,
                p,
                cfg.counts * f64::from(multiple),
                [Estimator::Aaqpt.tag(), u64::from(multiple), idx as u64],
                exec,
            )?;
            if multiple == 1 {
                ratio = row.std / optimal.std;
            }
            if crossover.is_none() && row.std <= CROSSOVER_FACTOR * optimal.std {
                crossover = Some(multiple);
            }
            rows.push(row);
        }
        report.comparisons.push(Comparison {
            p_true: p,
            counts: cfg.counts,
            optimal_std: optimal.std,
            std_ratio: ratio,
            crossover_multiple: crossover,
        });
        report.rows.push(optimal);
        report.rows.extend(rows);
    }
    Ok(report)
}

pub fn report_to_csv(report: &MonteCarloReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.p_true,
            r.estimator.name(),
            r.counts,
            r.trials,
            r.mean,
            r.std,
            r.bound,
            report.seed
        );
    }
    out
}

pub fn report_to_json(report: &MonteCarloReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn report_from_json(text: &str) -> Result<MonteCarloReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn emit_report(report: &MonteCarloReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => report_to_csv(report),
        ReportFormat::Json => report_to_json(report)?,
    };
    write_file(path, &text)
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellProbability {
    pub label: String,
    pub pauli: String,
    pub probability: f64,
}

/// Bell-outcome distribution of the singlet sent through the channel set by
/// a timing configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellProbsReport {
    pub version: String,
    pub timing: TimingConfig,
    pub pauli_probabilities: [f64; 4],
    pub outcomes: Vec<BellProbability>,
}

pub fn bell_probs_report(timing: &TimingConfig) -> BellProbsReport {
    let probs = timing_to_probs(timing);
    let dist = bell_outcome_probs(&probs);
    let outcomes = Pauli::ALL
        .iter()
        .map(|&pauli| {
            let label = bell_label_for(pauli);
            BellProbability {
                label: label.name().to_string(),
                pauli: pauli.symbol().to_string(),
                probability: dist.probabilities()[label.index()],
            }
        })
        .collect();
    BellProbsReport {
        version: VERSION_TAG.to_string(),
        timing: *timing,
        pauli_probabilities: probs.as_array(),
        outcomes,
    }
}

pub fn bell_probs_to_csv(report: &BellProbsReport) -> String {
    let mut out = String::from("label,pauli,probability\n");
    for o in &report.outcomes {
        let _ = writeln!(out, "{},{},{}", o.label, o.pauli, o.probability);
    }
    out
}

pub fn render_bell_probs(report: &BellProbsReport, format: ReportFormat) -> Result<String> {
    Ok(match format {
        ReportFormat::Csv => bell_probs_to_csv(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
    })
}

pub fn emit_bell_probs(report: &BellProbsReport, path: &Path, format: ReportFormat) -> Result<()> {
    write_file(path, &render_bell_probs(report, format)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> MonteCarloReport {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.5], 1e4, 42);
        let mut report = MonteCarloReport::empty(cfg);
        report.rows.push(ReportRow {
            p_true: 0.5,
            estimator: Estimator::Optimal,
            counts: 10000.0,
            trials: 1000,
            mean: 0.4987,
            std: 0.0049,
            bound: 0.005,
            estimates: vec![0.49, 0.51],
        });
        report
    }

    #[test]
    fn empty_report_is_header_only() {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.5], 1e4, 1);
        assert_eq!(report_to_csv(&MonteCarloReport::empty(cfg)), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_row_format() {
        let csv = report_to_csv(&sample_report());
        assert_eq!(
            csv,
            "p_true,estimator,counts,trials,mean,std,bound,seed\n0.5,optimal,10000,1000,0.4987,0.0049,0.005,42\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let report = sample_report();
        let parsed = report_from_json(&report_to_json(&report).unwrap()).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(Experiment::OptimalDc, vec![0.2], 100.0, 0);
        assert!(ok.validate().is_ok());
        assert!(ExperimentConfig { p_values: vec![], ..ok.clone() }.validate().is_err());
        assert!(ExperimentConfig { p_values: vec![1.2], ..ok.clone() }.validate().is_err());
        assert!(ExperimentConfig { counts: 0.0, ..ok.clone() }.validate().is_err());
        assert!(ok.clone().with_trials(1).validate().is_err());
        let bell = ExperimentConfig::new(Experiment::BellProbs, vec![], 1.0, 0);
        assert!(bell.validate().is_err());
    }

    #[test]
    fn noiseless_channel_is_deterministic() {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.0], 5000.0, 9).with_trials(50);
        let report = run_montecarlo(&cfg).unwrap();
        let row = &report.rows[0];
        assert!(row.estimates.iter().all(|&e| e == 0.0));
        assert_eq!(row.std, 0.0);
        assert_eq!(row.bound, 0.0);
    }

    #[test]
    fn rows_sorted_by_p() {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.7, 0.1, 0.4], 1000.0, 3).with_trials(10);
        let report = run_montecarlo(&cfg).unwrap();
        let ps: Vec<f64> = report.rows.iter().map(|r| r.p_true).collect();
        assert_eq!(ps, vec![0.1, 0.4, 0.7]);
    }

    #[test]
    fn sequential_equals_parallel() {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.3, 0.6], 2000.0, 77).with_trials(64);
        let a = run_montecarlo_with(&cfg, Execution::Sequential).unwrap();
        let b = run_montecarlo_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(report_to_csv(&a), report_to_csv(&b));
        assert_eq!(a, b);
    }

    #[test]
    fn comparison_requires_compare() {
        let cfg = ExperimentConfig::new(Experiment::OptimalDc, vec![0.5], 1600.0, 1);
        assert!(run_comparison(&cfg).is_err());
        let one = ExperimentConfig::new(Experiment::Compare, vec![0.5], 1600.0, 1).with_trials(1);
        assert!(run_comparison(&one).is_err());
    }

    #[test]
    fn bell_probs_for_process_d() {
        let report = bell_probs_report(&TimingConfig::new(3.0, 4.0, 1.0, 8.0).unwrap());
        let csv = bell_probs_to_csv(&report);
        assert_eq!(csv, "label,pauli,probability\npsi-,I,0\nphi-,X,0.375\nphi+,Y,0.5\npsi+,Z,0.125\n");
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(ReportFormat::from_path(Path::new("a/b.JSON")), ReportFormat::Json);
        assert_eq!(ReportFormat::from_path(Path::new("a/b.csv")), ReportFormat::Csv);
        assert_eq!(ReportFormat::from_path(Path::new("out")), ReportFormat::Csv);
    }

    #[test]
    fn io_error_carries_path() {
        let err = emit_report(&sample_report(), Path::new("/nonexistent-dir/x.csv"), ReportFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
