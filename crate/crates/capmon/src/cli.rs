//! Command-line surface: subcommands, flags, and the config-key help
//! texts shown by `--help`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const SCENARIO_KEYS_HELP: &str = "\
Scenario config keys (TOML, or JSON for .json files). Every key is
optional; an omitted key takes the default shown. Key names carry SI
units.

  c_farads               true capacitance, farads          default 0.0022
  esr_ohms               true ESR, ohms                    default 0.04
  v_sm_dc_volts          starting submodule voltage, V     default 8
  i_dc_amperes           arm current DC component, A       default -8
  i_ac_mag_amperes       fundamental AC magnitude, A       default 20
  i_2h_mag_amperes       second-harmonic magnitude, A      default 0
  f_grid_hertz           fundamental frequency, Hz         default 50
  f_sw_hertz             switching frequency, Hz           default 3000
  duty                   insertion duty cycle, 0..1        default 0.5
  f_sa_hertz             sample rate, Hz (>= 10 * f_sw)    default 100000
  window_len_seconds     window length, s                  default 0.01
  noise_sigma_v_volts    voltage noise sigma, V            default 0
  noise_sigma_i_amperes  current noise sigma, A            default 0
  seed                   noise RNG seed, 64-bit integer    default 42
";

const PSO_KEYS_HELP: &str = "\
Estimator config keys (TOML, or JSON for .json files). Every key is
optional; an omitted key takes the default shown. Key names carry SI
units; PSO weights, the error limit, and the velocity clamp are
dimensionless.

  swarm_size        particles per swarm                    default 10
  cognitive_weight  personal-best pull c1                  default 1.49
  social_weight     global-best pull c2                    default 1.49
  inertia_start     inertia weight at the first iteration  default 0.9
  inertia_end       inertia weight at the last iteration   default 0.4
  max_iterations    iteration budget per run               default 100
  error_limit       stop once cost <= limit (normalized)   default 1e-6
  bounds_c_farads   C search interval [lo, hi], farads     default [0.0011, 0.0066]
  bounds_esr_ohms   ESR search interval [lo, hi], ohms     default [0.02, 0.12]
  repeats           runs per estimate, median taken        default 15
  velocity_clamp    speed cap, fraction of bound width     default 0.5
  seed              base RNG seed, 64-bit integer          default 42
";

/// Condition monitoring for power-converter submodule capacitors:
/// estimate capacitance and ESR from sampled waveforms.
#[derive(Debug, Parser)]
#[command(name = "capmon", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic sampling window with known ground truth
    Simulate(SimulateArgs),
    /// Replay a window's voltage prediction for a given parameter pair
    Predict(PredictArgs),
    /// Estimate capacitance and ESR from a sampling window
    Estimate(EstimateArgs),
    /// Rerun estimation across values of one estimator parameter
    Sweep(SweepArgs),
    /// Map a report's median estimates to an end-of-life verdict
    Assess(AssessArgs),
    /// Export boxplot data from estimation reports
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Predict(_) => "predict",
            Command::Estimate(_) => "estimate",
            Command::Sweep(_) => "sweep",
            Command::Assess(_) => "assess",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Args)]
#[command(after_long_help = SCENARIO_KEYS_HELP)]
pub struct SimulateArgs {
    /// Scenario config file; the default scenario applies when omitted
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override the config's noise seed
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Window CSV to write (header `t,v_sm,v_sw,i_arm`)
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(after_long_help = "\
Takes no config file. Units: --c is in farads, --esr in ohms; the output
columns t, v_sm, v_hat, and err are in seconds and volts.
")]
pub struct PredictArgs {
    /// Window CSV to replay
    #[arg(long, value_name = "PATH")]
    pub window: PathBuf,
    /// Candidate capacitance, farads
    #[arg(long, value_name = "FARADS")]
    pub c: f64,
    /// Candidate ESR, ohms
    #[arg(long, value_name = "OHMS")]
    pub esr: f64,
    /// Prediction CSV to write (header `t,v_sm,v_hat,err`)
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(after_long_help = PSO_KEYS_HELP)]
pub struct EstimateArgs {
    /// Window CSV to estimate from
    #[arg(long, value_name = "PATH")]
    pub window: PathBuf,
    /// Estimator config file; library defaults apply when omitted
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override the config's base seed
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Fail (exit 3) when the window has no switching transitions and
    /// ESR is therefore unobservable
    #[arg(long)]
    pub strict: bool,
    /// Report JSON to write
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    #[value(name = "swarm_size")]
    SwarmSize,
    #[value(name = "error_limit")]
    ErrorLimit,
}

impl SweepParam {
    pub fn key(&self) -> &'static str {
        match self {
            SweepParam::SwarmSize => "swarm_size",
            SweepParam::ErrorLimit => "error_limit",
        }
    }
}

#[derive(Debug, Args)]
#[command(after_long_help = PSO_KEYS_HELP)]
pub struct SweepArgs {
    /// Window CSV to estimate from
    #[arg(long, value_name = "PATH")]
    pub window: PathBuf,
    /// Estimator config file the sweep starts from; library defaults
    /// apply when omitted
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Config key to sweep
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// Comma-separated values to sweep over, e.g. `5,10` or `1e-6,1e-3`
    #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
    pub values: Vec<String>,
    /// Independent single runs per value
    #[arg(long, value_name = "COUNT", default_value_t = 100)]
    pub runs: usize,
    /// Override the config's base seed
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Fail (exit 3) when the window has no switching transitions and
    /// ESR is therefore unobservable
    #[arg(long)]
    pub strict: bool,
    /// Sweep CSV to write, one row per value
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(after_long_help = "\
Takes no config file. Units: --c0 is in farads, --esr0 in ohms; the
verdict thresholds are fixed at C <= 0.8 p.u. and ESR >= 2.0 p.u. of
these references.
")]
pub struct AssessArgs {
    /// Estimation report JSON to assess
    #[arg(long, value_name = "PATH")]
    pub report: PathBuf,
    /// Nameplate capacitance reference, farads
    #[arg(long, value_name = "FARADS")]
    pub c0: f64,
    /// Initial ESR reference, ohms
    #[arg(long, value_name = "OHMS")]
    pub esr0: f64,
    /// Also write the JSON detail to this path
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportParam {
    #[value(name = "c")]
    Capacitance,
    #[value(name = "esr")]
    Esr,
}

#[derive(Debug, Args)]
#[command(after_long_help = "\
Takes no config file. Each input report contributes one output row
summarizing its per-repeat estimates; `--param c` rows are in farads,
`--param esr` rows in ohms. The row id is the report's window_id, or the
file stem when the report carries none.
")]
pub struct ReportArgs {
    /// Output format
    #[arg(long, value_parser = ["boxplot-csv"])]
    pub format: String,
    /// Which estimate series to summarize
    #[arg(long, value_enum)]
    pub param: ReportParam,
    /// Boxplot CSV to write, one row per report
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Estimation report JSONs, one per submodule
    #[arg(value_name = "REPORT", required = true)]
    pub reports: Vec<PathBuf>,
}
