//! Reproducible experiment driver: every analysis pipeline as a subcommand
//! with explicit configuration, seeds and machine-readable output.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 configuration error,
//! 3 accuracy warning escalated (endpoint minima, accuracy failures).

use crate::analysis::{
    boosted_experiment, robertson_suite, spherical_experiment, BoostedReport, RobertsonSummary,
    ScanProtocol, SphericalReport,
};
use crate::model::verify::{
    bound_suite, condition_residual_suite, kernel_lower_bound_suite, log_spaced,
    taylor_order_suite, SuiteResult,
};
use crate::model::{AnsatzKind, AnsatzModel, Axis, BoundId, KernelForm, PhysicalScales};
use crate::states::Measure;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "GUPLAB_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureChoice {
    Flat,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Command-line interface of the laboratory.
#[derive(Debug, Parser)]
#[command(name = "guplab", version, about = "momentum-cap operator laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub opts: CommonOpts,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand; a config file may provide defaults,
/// flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CommonOpts {
    /// ansatz family: identity|tanh|arctan|kmm-g|kmm-h
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<AnsatzKind>,
    /// momentum cap p_max
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmax: Option<f64>,
    /// reduced Planck constant
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    /// inner-product measure: flat|weighted
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureChoice>,
    /// grid resolution (power of two, 16..=256) for grid-based workflows
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// grid half-extent in state widths
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    /// finite-difference order: 2|4
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// random seed for the state-drawing suites
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// output format: json|csv
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// output path (default: <output dir>/<command>.<ext>)
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// JSON config file supplying defaults for any of the above
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the scalar-layer invariant suites.
    Verify,
    /// Tabulate the commutator kernel forms along axis-1 momenta.
    CommutatorTable {
        /// first axis index (1..=3)
        #[arg(long, default_value_t = 2)]
        axis_i: usize,
        /// second axis index (1..=3)
        #[arg(long, default_value_t = 2)]
        axis_j: usize,
        /// number of log-spaced |p| samples in [0.01, 10] p_max
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Spherical minimal-length experiment over an isotropic Gaussian family.
    Spherical {
        /// lower edge of the width scan, in p_max units
        #[arg(long, default_value_t = 0.05)]
        sigma_min: f64,
        /// upper edge of the width scan, in p_max units
        #[arg(long, default_value_t = 20.0)]
        sigma_max: f64,
    },
    /// Boosted minimal-length experiment with mean momentum along axis 1.
    Boosted {
        /// boost momentum in p_max units
        #[arg(long, default_value_t = 1.0)]
        p1: f64,
        #[arg(long, default_value_t = 0.05)]
        sigma_min: f64,
        #[arg(long, default_value_t = 20.0)]
        sigma_max: f64,
    },
    /// Robertson-inequality sweep over seeded random superpositions.
    Robertson {
        /// number of random states
        #[arg(long, default_value_t = 200)]
        n_states: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::CommutatorTable { .. } => "commutator_table",
            Command::Spherical { .. } => "spherical",
            Command::Boosted { .. } => "boosted",
            Command::Robertson { .. } => "robertson",
        }
    }
}

/// Fully resolved configuration (flags over config file over defaults).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub model: AnsatzKind,
    pub hbar: f64,
    pub p_max: f64,
    pub measure: MeasureChoice,
    pub grid: usize,
    pub extent: f64,
    pub order: usize,
    pub seed: u64,
    pub format: OutputFormat,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl RunConfig {
    /// Merge flags with the optional config file and validate.
    pub fn resolve(opts: &CommonOpts) -> Result<RunConfig, CliError> {
        let file: CommonOpts = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("bad config file: {e}")))?
            }
            None => CommonOpts::default(),
        };
        let cfg = RunConfig {
            model: opts.model.or(file.model).unwrap_or(AnsatzKind::TanhCap),
            hbar: opts.hbar.or(file.hbar).unwrap_or(1.0),
            p_max: opts.pmax.or(file.pmax).unwrap_or(1.0),
            measure: opts
                .measure
                .or(file.measure)
                .unwrap_or(MeasureChoice::Weighted),
            grid: opts.grid.or(file.grid).unwrap_or(64),
            extent: opts.extent.or(file.extent).unwrap_or(8.0),
            order: opts.order.or(file.order).unwrap_or(4),
            seed: opts.seed.or(file.seed).unwrap_or(0),
            format: opts.format.or(file.format).unwrap_or(OutputFormat::Json),
            output: opts.output.clone().or(file.output),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(CliError::Config(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            return Err(CliError::Config(format!(
                "pmax must be positive, got {}",
                self.p_max
            )));
        }
        if !(16..=256).contains(&self.grid) || !self.grid.is_power_of_two() {
            return Err(CliError::Config(format!(
                "grid must be a power of two in [16, 256], got {}",
                self.grid
            )));
        }
        if self.order != 2 && self.order != 4 {
            return Err(CliError::Config(format!(
                "order must be 2 or 4, got {}",
                self.order
            )));
        }
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(CliError::Config(format!(
                "extent must be positive, got {}",
                self.extent
            )));
        }
        Ok(())
    }

    pub fn ansatz(&self) -> AnsatzModel {
        AnsatzModel::new(
            self.model,
            PhysicalScales::new(self.hbar, self.p_max).expect("validated"),
        )
    }

    pub fn measure_for(&self, model: &AnsatzModel) -> Measure {
        match self.measure {
            MeasureChoice::Flat => Measure::Flat,
            MeasureChoice::Weighted => Measure::weighted(*model),
        }
    }

    /// Output path: explicit, or `$GUPLAB_OUTPUT_DIR/<command>.<ext>`.
    pub fn output_path(&self, command: &Command) -> PathBuf {
        if let Some(p) = &self.output {
            return p.clone();
        }
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{}.{}", command.name(), self.format.extension()))
    }
}

// ------------------------------------------------------------- reports

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelRow {
    pub p_over_pmax: f64,
    pub exact: f64,
    pub paper_second_order: Option<f64>,
    pub taylor_second_order: Option<f64>,
    pub sqrt_lower_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorTableReport {
    pub config: RunConfig,
    pub axis_i: usize,
    pub axis_j: usize,
    pub rows: Vec<KernelRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphericalCliReport {
    pub config: RunConfig,
    pub status: &'static str,
    #[serde(flatten)]
    pub report: SphericalReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoostedCliReport {
    pub config: RunConfig,
    pub status: &'static str,
    #[serde(flatten)]
    pub report: BoostedReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobertsonCliReport {
    pub config: RunConfig,
    #[serde(flatten)]
    pub summary: RobertsonSummary,
}

/// A rendered report plus the exit code it implies.
pub struct CommandOutput {
    pub json: String,
    pub csv: String,
    pub exit_code: i32,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Run one subcommand against a resolved configuration.
pub fn run_command(cfg: &RunConfig, command: &Command) -> Result<CommandOutput, CliError> {
    let model = cfg.ansatz();
    match command {
        Command::Verify => {
            let mut suites = Vec::new();
            for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
                let m = AnsatzModel::new(kind, model.scales);
                suites.push(condition_residual_suite(&m, 10_000, 1e-12));
            }
            for id in BoundId::ALL {
                suites.push(bound_suite(id, 1_000_000, 1e-12));
            }
            for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
                suites.push(kernel_lower_bound_suite(kind, 10_000, 1e-12));
                suites.push(taylor_order_suite(kind, 0.25));
            }
            let pass = suites.iter().all(|s| s.pass);
            let report = VerifyReport {
                config: cfg.clone(),
                suites,
                pass,
            };
            let mut csv = String::from("suite,worst,tolerance,pass\n");
            for s in &report.suites {
                let _ = writeln!(csv, "{},{},{},{}", s.name, s.worst, s.tolerance, s.pass);
            }
            Ok(CommandOutput {
                json: to_json(&report),
                csv,
                exit_code: if pass { 0 } else { 1 },
            })
        }
        Command::CommutatorTable {
            axis_i,
            axis_j,
            samples,
        } => {
            let i = Axis::from_index(*axis_i)
                .ok_or_else(|| CliError::Config(format!("axis_i out of range: {axis_i}")))?;
            let j = Axis::from_index(*axis_j)
                .ok_or_else(|| CliError::Config(format!("axis_j out of range: {axis_j}")))?;
            if *samples < 2 {
                return Err(CliError::Config("samples must be at least 2".into()));
            }
            let mut rows = Vec::with_capacity(*samples);
            for r in log_spaced(1e-2, 10.0, *samples) {
                let p = [r * cfg.p_max, 0.0, 0.0];
                let eval = |form: KernelForm| -> Option<f64> {
                    form.supports(cfg.model)
                        .then(|| model.commutator_kernel(form, p, i, j).unwrap())
                };
                rows.push(KernelRow {
                    p_over_pmax: r,
                    exact: eval(KernelForm::Exact).expect("exact supports every kind"),
                    paper_second_order: eval(KernelForm::PaperSecondOrder),
                    taylor_second_order: eval(KernelForm::TaylorSecondOrder),
                    sqrt_lower_bound: eval(KernelForm::SqrtLowerBound),
                });
            }
            let report = CommutatorTableReport {
                config: cfg.clone(),
                axis_i: *axis_i,
                axis_j: *axis_j,
                rows,
            };
            let mut csv = String::from(
                "p_over_pmax,exact,paper_second_order,taylor_second_order,sqrt_lower_bound\n",
            );
            for row in &report.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    row.p_over_pmax,
                    row.exact,
                    fmt_opt(row.paper_second_order),
                    fmt_opt(row.taylor_second_order),
                    fmt_opt(row.sqrt_lower_bound)
                );
            }
            Ok(CommandOutput {
                json: to_json(&report),
                csv,
                exit_code: 0,
            })
        }
        Command::Spherical {
            sigma_min,
            sigma_max,
        } => {
            if !(*sigma_min > 0.0 && sigma_max > sigma_min) {
                return Err(CliError::Config(format!(
                    "bad sigma range [{sigma_min}, {sigma_max}]"
                )));
            }
            let measure = cfg.measure_for(&model);
            let report = spherical_experiment(
                &model,
                &measure,
                (sigma_min * cfg.p_max, sigma_max * cfg.p_max),
                &ScanProtocol::default(),
            )
            .map_err(|e| CliError::Config(format!("experiment failed: {e}")))?;
            let status = if report.scan.interior {
                "interior-minimum"
            } else {
                "no-interior-minimum"
            };
            let exit_code = if report.scan.interior { 0 } else { 3 };
            let mut csv =
                String::from("sigma,delta_x,delta_p,product,exact_rhs,second_order_rhs\n");
            for d in &report.details {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    d.sigma,
                    d.delta_x,
                    d.delta_p,
                    d.product,
                    d.exact_rhs,
                    fmt_opt(d.second_order_rhs)
                );
            }
            let wrapped = SphericalCliReport {
                config: cfg.clone(),
                status,
                report,
            };
            Ok(CommandOutput {
                json: to_json(&wrapped),
                csv,
                exit_code,
            })
        }
        Command::Boosted {
            p1,
            sigma_min,
            sigma_max,
        } => {
            if !(*sigma_min > 0.0 && sigma_max > sigma_min) {
                return Err(CliError::Config(format!(
                    "bad sigma range [{sigma_min}, {sigma_max}]"
                )));
            }
            if *p1 < 0.0 {
                return Err(CliError::Config(format!(
                    "p1 must be nonnegative, got {p1}"
                )));
            }
            let measure = cfg.measure_for(&model);
            let report = boosted_experiment(
                &model,
                &measure,
                p1 * cfg.p_max,
                (sigma_min * cfg.p_max, sigma_max * cfg.p_max),
                &ScanProtocol::default(),
            )
            .map_err(|e| CliError::Config(format!("experiment failed: {e}")))?;
            let interior = report.parallel.interior && report.orthogonal.interior;
            let status = if interior {
                "interior-minimum"
            } else {
                "no-interior-minimum"
            };
            let mut csv = String::from("direction,sigma,delta_x,delta_p\n");
            for d in &report.details {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    d.direction, d.sigma, d.delta_x, d.delta_p
                );
            }
            let wrapped = BoostedCliReport {
                config: cfg.clone(),
                status,
                report,
            };
            Ok(CommandOutput {
                json: to_json(&wrapped),
                csv,
                exit_code: if interior { 0 } else { 3 },
            })
        }
        Command::Robertson { n_states } => {
            if *n_states == 0 {
                return Err(CliError::Config("n_states must be at least 1".into()));
            }
            let summary = robertson_suite(&model, *n_states, cfg.seed)
                .map_err(|e| CliError::Config(format!("suite failed: {e}")))?;
            let exit_code = if summary.violations > 0 {
                1
            } else if summary.accuracy_failures > 0 {
                3
            } else {
                0
            };
            let mut csv = String::from("state,axis_i,axis_j,delta_x,delta_p,commutator,slack\n");
            for e in &summary.entries {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    e.state,
                    e.report.axis_i,
                    e.report.axis_j,
                    e.report.delta_x,
                    e.report.delta_p,
                    e.report.commutator_expectation,
                    e.report.robertson_slack
                );
            }
            let wrapped = RobertsonCliReport {
                config: cfg.clone(),
                summary,
            };
            Ok(CommandOutput {
                json: to_json(&wrapped),
                csv,
                exit_code,
            })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Entry point used by the binary: parse, run, write, return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap reports usage errors on code 2 (the config-error code)
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match RunConfig::resolve(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let out = match run_command(&cfg, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let path = cfg.output_path(&cli.command);
    let payload = match cfg.format {
        OutputFormat::Json => &out.json,
        OutputFormat::Csv => &out.csv,
    };
    if let Err(e) = write_report(&path, payload) {
        eprintln!("failed to write {}: {e}", path.display());
        return 2;
    }
    println!("{}", path.display());
    out.exit_code
}

fn write_report(path: &Path, payload: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<(RunConfig, Command), CliError> {
        let mut full = vec!["guplab"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).map_err(|e| CliError::Config(e.to_string()))?;
        let cfg = RunConfig::resolve(&cli.opts)?;
        Ok((cfg, cli.command))
    }

    #[test]
    fn defaults_are_natural_units() {
        let (cfg, _) = resolve(&["verify"]).unwrap();
        assert_eq!(cfg.model, AnsatzKind::TanhCap);
        assert_eq!(cfg.hbar, 1.0);
        assert_eq!(cfg.p_max, 1.0);
        assert_eq!(cfg.grid, 64);
        assert_eq!(cfg.order, 4);
        assert!(matches!(cfg.measure, MeasureChoice::Weighted));
    }

    #[test]
    fn invalid_scales_rejected() {
        assert!(matches!(
            resolve(&["--hbar", "-1", "verify"]),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            resolve(&["--grid", "60", "verify"]),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            resolve(&["--grid", "512", "verify"]),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            resolve(&["--order", "3", "verify"]),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("guplab-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("config.json");
        std::fs::write(&cfg_path, r#"{"model":"arctan","pmax":2.0,"seed":7}"#).unwrap();
        let (cfg, _) = resolve(&["--config", cfg_path.to_str().unwrap(), "verify"]).unwrap();
        assert_eq!(cfg.model, AnsatzKind::ArctanCap);
        assert_eq!(cfg.p_max, 2.0);
        assert_eq!(cfg.seed, 7);
        let (cfg, _) = resolve(&[
            "--config",
            cfg_path.to_str().unwrap(),
            "--model",
            "tanh",
            "verify",
        ])
        .unwrap();
        assert_eq!(cfg.model, AnsatzKind::TanhCap);
        assert_eq!(cfg.p_max, 2.0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn verify_passes_with_default_config() {
        let (cfg, cmd) = resolve(&["verify"]).unwrap();
        let out = run_command(&cfg, &cmd).unwrap();
        assert_eq!(out.exit_code, 0);
        // one entry per bound id
        let bound_rows = out.csv.lines().filter(|l| l.starts_with("bound-")).count();
        assert_eq!(bound_rows, 5);
    }

    #[test]
    fn commutator_table_row_values() {
        let (cfg, _) = resolve(&["commutator-table"]).unwrap();
        // tanh, i = j = 2, momentum along axis 1: transverse kernel
        let cmd = Command::CommutatorTable {
            axis_i: 2,
            axis_j: 2,
            samples: 30,
        };
        let out = run_command(&cfg, &cmd).unwrap();
        assert_eq!(out.exit_code, 0);
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(
            lines[0],
            "p_over_pmax,exact,paper_second_order,taylor_second_order,sqrt_lower_bound"
        );
        assert_eq!(lines.len(), 31);
        // tanh has no sqrt column
        assert!(lines[1].ends_with(','));

        // longitudinal direction: all defined columns are exactly 1
        let cmd = Command::CommutatorTable {
            axis_i: 1,
            axis_j: 1,
            samples: 5,
        };
        let out = run_command(&cfg, &cmd).unwrap();
        for line in out.csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[1], "1");
            assert_eq!(cols[2], "1");
            assert_eq!(cols[3], "1");
        }
    }

    #[test]
    fn arctan_table_orders_exact_above_sqrt_above_one() {
        let (cfg, _) = resolve(&["--model", "arctan", "commutator-table"]).unwrap();
        let cmd = Command::CommutatorTable {
            axis_i: 2,
            axis_j: 2,
            samples: 40,
        };
        let out = run_command(&cfg, &cmd).unwrap();
        for line in out.csv.lines().skip(1) {
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect();
            let (exact, sqrt) = (cols[1], cols[4]);
            assert!(exact >= sqrt - 1e-12, "{line}");
            assert!(sqrt >= 1.0, "{line}");
        }
    }

    #[test]
    fn spherical_identity_flags_no_interior_minimum() {
        let (cfg, _) = resolve(&["--model", "identity", "spherical"]).unwrap();
        let cmd = Command::Spherical {
            sigma_min: 0.05,
            sigma_max: 20.0,
        };
        let out = run_command(&cfg, &cmd).unwrap();
        assert_eq!(out.exit_code, 3);
        assert!(out.json.contains("no-interior-minimum"));
    }

    #[test]
    fn robertson_small_run_passes() {
        let (cfg, _) = resolve(&["--seed", "11", "robertson"]).unwrap();
        let cmd = Command::Robertson { n_states: 4 };
        let out = run_command(&cfg, &cmd).unwrap();
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.csv.lines().count(), 1 + 4 * 9);
    }

    #[test]
    fn outputs_are_deterministic() {
        let (cfg, _) = resolve(&["--seed", "3", "robertson"]).unwrap();
        let cmd = Command::Robertson { n_states: 3 };
        let a = run_command(&cfg, &cmd).unwrap();
        let b = run_command(&cfg, &cmd).unwrap();
        assert_eq!(a.json, b.json);
        assert_eq!(a.csv, b.csv);
    }
}
