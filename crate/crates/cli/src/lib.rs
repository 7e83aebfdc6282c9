//! Batch experiment runner for the secrecy outage engines.
//!
//! A run is a JSON scenario plus one sweep axis. Each sweep point is evaluated
//! by every requested engine and scheme and lands as one CSV row.

pub mod config;

use std::io::Write;

use noma_sop::asymptotic::{sdo, sop_asym_total, SdoInputs};
use noma_sop::montecarlo::estimate_sop_schemes;
use noma_sop::{sop_total, Allocation, QuadratureSpec, SchemeKind, SopError};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{load_config, parse_config, Engine, ExperimentConfig, Scenario, Sweep, SweepVar};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) | CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

/// One `(sweep value, scheme, engine)` result.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub scheme: SchemeKind,
    pub engine: Engine,
    pub sop: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: Option<u64>,
    pub sdo: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    fn new(var: SweepVar, value: f64, scheme: SchemeKind, engine: Engine) -> Self {
        Row {
            sweep_var: var.name(),
            sweep_value: value,
            scheme,
            engine,
            sop: None,
            stderr: None,
            trials: None,
            sdo: None,
            error: None,
        }
    }

    fn failed(mut self, err: impl ToString) -> Self {
        self.error = Some(err.to_string());
        self
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    sweep_var: &'a str,
    sweep_value: f64,
    scheme: &'a str,
    engine: &'a str,
    sop: Option<f64>,
    stderr: Option<f64>,
    trials: Option<u64>,
    sdo: Option<f64>,
    error: Option<&'a str>,
}

pub const CSV_HEADER: [&str; 9] = [
    "sweep_var",
    "sweep_value",
    "scheme",
    "engine",
    "sop",
    "stderr",
    "trials",
    "sdo",
    "error",
];

/// Evaluate every sweep point. Engine failures are kept in the row's `error`
/// field and do not stop the run.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<Row>, CliError> {
    let quad = QuadratureSpec::gauss_legendre(config.quad_n)
        .map_err(|e| CliError::Config(format!("`quad_n`: {e}")))?;
    let var = config.sweep.var;
    let mut rows: Vec<Row> = config
        .sweep
        .values
        .par_iter()
        .flat_map_iter(|&value| evaluate_point(config, &quad, var, value))
        .collect();
    rows.sort_by(|a, b| {
        a.sweep_value
            .total_cmp(&b.sweep_value)
            .then(a.scheme.cmp(&b.scheme))
            .then(a.engine.cmp(&b.engine))
    });
    Ok(rows)
}

fn evaluate_point(
    config: &ExperimentConfig,
    quad: &QuadratureSpec,
    var: SweepVar,
    value: f64,
) -> Vec<Row> {
    let mut rows = Vec::new();
    let point = match config.scenario.with(var, value).and_then(|s| s.resolve()) {
        Ok(p) => p,
        Err(e) => {
            for &engine in &config.engines {
                for &scheme in &config.schemes {
                    rows.push(Row::new(var, value, scheme, engine).failed(&e));
                }
            }
            return rows;
        }
    };
    let (params, policy) = (point.params, point.policy);

    for &engine in &config.engines {
        match engine {
            Engine::Analytic => {
                for &scheme in &config.schemes {
                    let row = Row::new(var, value, scheme, engine);
                    rows.push(match sop_total(&params, &policy, scheme, quad) {
                        Ok(r) => Row {
                            sop: Some(r.value),
                            ..row
                        },
                        Err(e) => row.failed(e),
                    });
                }
            }
            Engine::Asymptotic => {
                let scaling = point.scaling();
                for &scheme in &config.schemes {
                    let row = Row::new(var, value, scheme, engine);
                    let result = scaling
                        .clone()
                        .and_then(|sc| sop_asym_total(&params, &policy, scheme, &sc, quad));
                    let mut row = match result {
                        Ok(r) => Row {
                            sop: Some(r.value),
                            ..row
                        },
                        Err(e) => row.failed(e),
                    };
                    if let Allocation::Dynamic { varpi, .. } = policy.allocation {
                        let inputs = SdoInputs {
                            relays: params.relays as u32,
                            m_r: params.links.source_relay.m(),
                            m_u: params.links.m_user(),
                            varpi,
                        };
                        if inputs.validate().is_ok() {
                            row.sdo = Some(sdo(scheme, &inputs, true));
                        }
                    }
                    rows.push(row);
                }
            }
            Engine::MonteCarlo => {
                match estimate_sop_schemes(&params, &policy, &config.schemes, &config.mc) {
                    Ok(estimates) => {
                        for (&scheme, est) in config.schemes.iter().zip(estimates) {
                            rows.push(Row {
                                sop: Some(est.p_hat),
                                stderr: Some(est.stderr),
                                trials: Some(est.trials),
                                ..Row::new(var, value, scheme, engine)
                            });
                        }
                    }
                    Err(e) => {
                        for &scheme in &config.schemes {
                            rows.push(Row::new(var, value, scheme, engine).failed(&e));
                        }
                    }
                }
            }
        }
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(CsvRow {
            sweep_var: r.sweep_var,
            sweep_value: r.sweep_value,
            scheme: r.scheme.name(),
            engine: r.engine.name(),
            sop: r.sop,
            stderr: r.stderr,
            trials: r.trials,
            sdo: r.sdo,
            error: r.error.as_deref(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Per `(scheme, engine)`, the sweep value with the smallest SOP.
pub fn argmin_by_series(rows: &[Row]) -> Vec<(SchemeKind, Engine, f64, f64)> {
    let mut best: Vec<(SchemeKind, Engine, f64, f64)> = Vec::new();
    for r in rows {
        let Some(sop) = r.sop else { continue };
        match best.iter_mut().find(|b| b.0 == r.scheme && b.1 == r.engine) {
            Some(b) if sop < b.3 => {
                b.2 = r.sweep_value;
                b.3 = sop;
            }
            Some(_) => {}
            None => best.push((r.scheme, r.engine, r.sweep_value, sop)),
        }
    }
    best.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    best
}

/// z-score of one analytic value against one MC estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPoint {
    pub sweep_value: f64,
    pub scheme: SchemeKind,
    pub analytic: f64,
    pub p_hat: f64,
    pub stderr: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub sweep_var: &'static str,
    pub points: Vec<ValidationPoint>,
    /// Rows where either engine failed, as `(value, scheme, message)`.
    pub errors: Vec<(f64, SchemeKind, String)>,
}

impl ValidationReport {
    pub fn within(&self, bound: f64) -> usize {
        self.points.iter().filter(|p| p.z.abs() <= bound).count()
    }

    pub fn max_abs_z(&self) -> f64 {
        self.points.iter().map(|p| p.z.abs()).fold(0.0, f64::max)
    }

    /// `max |analytic − p̂| / (3·stderr)`; at most 1 means every point sits
    /// within three standard errors.
    pub fn max_scaled_gap(&self) -> f64 {
        self.max_abs_z() / 3.0
    }

    /// Pass when at least 99% of the points have `|z| ≤ 3` and none exceeds 5.
    pub fn passed(&self) -> bool {
        if !self.errors.is_empty() {
            return false;
        }
        let n = self.points.len();
        n == 0 || (self.within(3.0) as f64 >= 0.99 * n as f64 && self.max_abs_z() <= 5.0)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "sweep_var",
            "sweep_value",
            "scheme",
            "analytic",
            "p_hat",
            "stderr",
            "z",
        ])?;
        for p in &self.points {
            w.write_record([
                self.sweep_var.to_string(),
                p.sweep_value.to_string(),
                p.scheme.name().to_string(),
                p.analytic.to_string(),
                p.p_hat.to_string(),
                p.stderr.to_string(),
                p.z.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let n = self.points.len();
        format!(
            "{} points, {} with |z| <= 3, max |z| = {:.3}, max gap/(3 stderr) = {:.3}, {} errors: {}",
            n,
            self.within(3.0),
            self.max_abs_z(),
            self.max_scaled_gap(),
            self.errors.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// `(analytic − p̂)/stderr`. An MC estimate of exactly 0 or 1 has zero sample
/// stderr, so the analytic value's binomial stderr stands in.
pub fn z_score(analytic: f64, p_hat: f64, stderr: f64, trials: u64) -> (f64, f64) {
    let se = if stderr > 0.0 {
        stderr
    } else {
        (analytic * (1.0 - analytic) / trials as f64).sqrt()
    };
    let diff = analytic - p_hat;
    let z = if diff == 0.0 {
        0.0
    } else if se > 0.0 {
        diff / se
    } else {
        f64::INFINITY.copysign(diff)
    };
    (z, se)
}

/// Run the analytic and MC engines on the same grid and score each point.
pub fn validate(config: &ExperimentConfig) -> Result<ValidationReport, CliError> {
    let cfg = ExperimentConfig {
        engines: vec![Engine::Analytic, Engine::MonteCarlo],
        ..config.clone()
    };
    let rows = run_sweep(&cfg)?;
    let mut report = ValidationReport {
        sweep_var: cfg.sweep.var.name(),
        points: Vec::new(),
        errors: Vec::new(),
    };
    let analytic = rows.iter().filter(|r| r.engine == Engine::Analytic);
    let simulated = rows.iter().filter(|r| r.engine == Engine::MonteCarlo);
    for (a, m) in analytic.zip(simulated) {
        if let Some(err) = a.error.as_ref().or(m.error.as_ref()) {
            report.errors.push((a.sweep_value, a.scheme, err.clone()));
            continue;
        }
        let (analytic, p_hat) = (a.sop.unwrap_or(f64::NAN), m.sop.unwrap_or(f64::NAN));
        let (z, stderr) = z_score(
            analytic,
            p_hat,
            m.stderr.unwrap_or(0.0),
            m.trials.unwrap_or(1),
        );
        report.points.push(ValidationPoint {
            sweep_value: a.sweep_value,
            scheme: a.scheme,
            analytic,
            p_hat,
            stderr,
            z,
        });
    }
    Ok(report)
}

/// Scheme SDOs for the config's relay count and fading. Fixed allocation
/// reports 0 for every scheme.
pub fn sdo_table(config: &ExperimentConfig) -> Result<Vec<(SchemeKind, f64)>, CliError> {
    let point = config.scenario.resolve()?;
    let (params, policy) = (point.params, point.policy);
    let varpi = match policy.allocation {
        Allocation::Dynamic { varpi, .. } => varpi,
        Allocation::Fixed { .. } => 0.5,
    };
    let inputs = SdoInputs {
        relays: params.relays as u32,
        m_r: params.links.source_relay.m(),
        m_u: params.links.m_user(),
        varpi,
    };
    inputs
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config
        .schemes
        .iter()
        .map(|&s| (s, sdo(s, &inputs, policy.is_dynamic())))
        .collect())
}

impl From<SopError> for CliError {
    fn from(e: SopError) -> Self {
        CliError::Numeric(e.to_string())
    }
}
