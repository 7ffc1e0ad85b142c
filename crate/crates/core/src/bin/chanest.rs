use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chanest_core::harness::{
    self, bell_probs_report, render_bell_probs, report_to_csv, report_to_json, Experiment, ExperimentConfig,
    MonteCarloReport, ReportFormat,
};
use chanest_core::{Error, SamplingMode, TimingConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_IO: u8 = 3;

/// Pauli-channel noise estimation: optimal Bell-measurement protocol versus
/// ancilla-assisted process tomography.
#[derive(Parser, Debug)]
#[command(name = "chanest", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bell outcome distribution for a switching-time configuration.
    BellProbs {
        /// t1,t2,t3,T (activation times of σx, σy, σz and the cycle period)
        #[arg(long, value_delimiter = ',', required = true)]
        timing: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo of the optimal two-outcome estimator.
    OptimalDc(MonteCarloArgs),
    /// Monte Carlo of ancilla-assisted process tomography.
    Aaqpt(MonteCarloArgs),
    /// Equal-budget comparison and tomography budget ladder.
    Compare(MonteCarloArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; defaults to json for *.json paths and csv otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct MonteCarloArgs {
    /// Comma-separated depolarizing parameters in [0, 1].
    #[arg(long = "p", value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Total counts per trial.
    #[arg(long)]
    counts: f64,
    #[arg(long, default_value_t = harness::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Count statistics; optimal-dc defaults to multinomial, the others to poisson.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Poisson,
    Multinomial,
}

impl OutputArgs {
    fn format(&self) -> ReportFormat {
        match (self.format, &self.out) {
            (Some(FormatArg::Csv), _) => ReportFormat::Csv,
            (Some(FormatArg::Json), _) => ReportFormat::Json,
            (None, Some(path)) => ReportFormat::from_path(path),
            (None, None) => ReportFormat::Csv,
        }
    }

    fn write(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source }),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
        }
    }
}

fn monte_carlo_config(experiment: Experiment, args: &MonteCarloArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(experiment, args.p.clone(), args.counts, args.seed).with_trials(args.trials);
    if let Some(mode) = args.mode {
        cfg.mode = match mode {
            ModeArg::Poisson => SamplingMode::Poisson,
            ModeArg::Multinomial => SamplingMode::Multinomial,
        };
    }
    cfg.output_path = args.output.out.as_ref().map(|p| p.display().to_string());
    cfg
}

fn render_report(report: &MonteCarloReport, format: ReportFormat) -> Result<String, Error> {
    match format {
        ReportFormat::Csv => Ok(report_to_csv(report)),
        ReportFormat::Json => report_to_json(report),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::BellProbs { timing, output } => {
            let [t1, t2, t3, period] = timing[..] else {
                return Err(Error::InvalidConfig(format!(
                    "--timing takes 4 values t1,t2,t3,T, got {}",
                    timing.len()
                )));
            };
            let timing = TimingConfig::new(t1, t2, t3, period)?;
            let report = bell_probs_report(&timing);
            output.write(&render_bell_probs(&report, output.format())?)
        }
        Command::OptimalDc(args) => {
            let report = harness::run_montecarlo(&monte_carlo_config(Experiment::OptimalDc, &args))?;
            args.output.write(&render_report(&report, args.output.format())?)
        }
        Command::Aaqpt(args) => {
            let report = harness::run_montecarlo(&monte_carlo_config(Experiment::Aaqpt, &args))?;
            args.output.write(&render_report(&report, args.output.format())?)
        }
        Command::Compare(args) => {
            let report = harness::run_comparison(&monte_carlo_config(Experiment::Compare, &args))?;
            for c in &report.comparisons {
                let crossover = c
                    .crossover_multiple
                    .map_or_else(|| "none".to_string(), |m| format!("{m}x"));
                eprintln!(
                    "p={} counts={}: aaqpt/optimal std ratio {:.3}, crossover {}",
                    c.p_true, c.counts, c.std_ratio, crossover
                );
            }
            args.output.write(&render_report(&report, args.output.format())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Io { .. } => EXIT_IO,
                ref e if e.is_config_error() => EXIT_CONFIG,
                _ => EXIT_RUNTIME,
            };
            ExitCode::from(code)
        }
    }
}
