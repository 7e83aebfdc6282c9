//! JSON scenario configuration.
//!
//! The file is one flat object. Powers and mean gains are given in dB, rates
//! in nats per channel use. Unknown keys are rejected so typos surface early.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use noma_sop::asymptotic::AsymptoticScaling;
use noma_sop::montecarlo::TrialConfig;
use noma_sop::{db_to_linear, LinkSet, NakagamiParams, PowerPolicy, SchemeKind, SystemParams};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_QUAD_N: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    Analytic,
    Asymptotic,
    MonteCarlo,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Asymptotic => "asymptotic",
            Engine::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Engine::Analytic),
            "asymptotic" => Ok(Engine::Asymptotic),
            "montecarlo" | "mc" | "simulate" => Ok(Engine::MonteCarlo),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    PowerDb,
    Omega2Db,
    Alpha1,
    AlphaJ,
    Relays,
    Fading,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::PowerDb => "P_dB",
            SweepVar::Omega2Db => "omega2_dB",
            SweepVar::Alpha1 => "alpha1",
            SweepVar::AlphaJ => "alphaJ",
            SweepVar::Relays => "K",
            SweepVar::Fading => "m",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P_dB" | "rho" | "P" => Ok(SweepVar::PowerDb),
            "omega2_dB" | "Omega2" => Ok(SweepVar::Omega2Db),
            "alpha1" => Ok(SweepVar::Alpha1),
            "alphaJ" => Ok(SweepVar::AlphaJ),
            "K" => Ok(SweepVar::Relays),
            "m" => Ok(SweepVar::Fading),
            other => Err(format!("unknown sweep variable `{other}` (expected P_dB, omega2_dB, alpha1, alphaJ, K or m)")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DpaRaw {
    mu: f64,
    varpi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepRaw {
    var: String,
    #[serde(default)]
    values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawConfig {
    K: u32,
    mR: u32,
    mU: u32,
    mE: u32,
    omegaR_dB: f64,
    omega1_dB: f64,
    omega2_dB: f64,
    omegaE_dB: f64,
    P_dB: f64,
    #[serde(default = "one")]
    sigma2: f64,
    #[serde(default = "r1_th_default")]
    R1_th: f64,
    #[serde(default = "r2_th_default")]
    R2_th: f64,
    R1_s: f64,
    R2_s: f64,
    alpha1: Option<f64>,
    #[serde(default)]
    alphaJ: f64,
    dpa: Option<DpaRaw>,
    eps1: Option<f64>,
    eps2: Option<f64>,
    #[serde(default)]
    scheme: Vec<String>,
    #[serde(default)]
    engine: Vec<String>,
    sweep: Option<SweepRaw>,
    trials: Option<u64>,
    seed: Option<u64>,
    chunk: Option<u64>,
    quad_n: Option<usize>,
    out: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn r1_th_default() -> f64 {
    0.2
}

fn r2_th_default() -> f64 {
    0.1
}

/// Scenario in boundary units; [`Scenario::resolve`] turns it into engine inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub relays: u32,
    pub m_r: u32,
    pub m_u: u32,
    pub m_e: u32,
    pub omega_r_db: f64,
    pub omega1_db: f64,
    pub omega2_db: f64,
    pub omega_e_db: f64,
    pub p_db: f64,
    pub sigma2: f64,
    pub r1_th: f64,
    pub r2_th: f64,
    pub r1_s: f64,
    pub r2_s: f64,
    pub alpha1: Option<f64>,
    pub alpha_j: f64,
    pub dpa: Option<(f64, f64)>,
    /// `Ω₁/Ω₂` and `Ω_R/Ω₂` (linear), held fixed when `Ω₂` is swept.
    pub eps1: f64,
    pub eps2: f64,
}

/// Engine inputs at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedPoint {
    pub params: SystemParams,
    pub policy: PowerPolicy,
    pub eps1: f64,
    pub eps2: f64,
}

impl ResolvedPoint {
    pub fn scaling(&self) -> Result<AsymptoticScaling, noma_sop::SopError> {
        AsymptoticScaling::new(self.eps1, self.eps2, self.params.links.relay_user2.omega())
    }
}

impl Scenario {
    /// Apply one sweep value and validate the result.
    pub fn with(&self, var: SweepVar, value: f64) -> Result<Scenario, CliError> {
        let mut s = self.clone();
        match var {
            SweepVar::PowerDb => s.p_db = value,
            SweepVar::Omega2Db => {
                s.omega2_db = value;
                s.omega1_db = value + 10.0 * s.eps1.log10();
                s.omega_r_db = value + 10.0 * s.eps2.log10();
            }
            SweepVar::Alpha1 => {
                if s.dpa.is_some() {
                    return Err(CliError::Config(
                        "sweep over alpha1 needs a fixed alpha1, not dpa".into(),
                    ));
                }
                s.alpha1 = Some(value)
            }
            SweepVar::AlphaJ => s.alpha_j = value,
            SweepVar::Relays => s.relays = positive_integer("sweep.values (K)", value)?,
            SweepVar::Fading => {
                let m = positive_integer("sweep.values (m)", value)?;
                s.m_r = m;
                s.m_u = m;
                s.m_e = m;
            }
        }
        s.resolve()?;
        Ok(s)
    }

    pub fn resolve(&self) -> Result<ResolvedPoint, CliError> {
        let gain = |key: &str, m: u32, db: f64| {
            NakagamiParams::new(m, db_to_linear(db))
                .map_err(|e| CliError::Config(format!("{key}: {e}")))
        };
        let links = LinkSet::new(
            gain("mR/omegaR_dB", self.m_r, self.omega_r_db)?,
            gain("mU/omega1_dB", self.m_u, self.omega1_db)?,
            gain("mU/omega2_dB", self.m_u, self.omega2_db)?,
            gain("mE/omegaE_dB", self.m_e, self.omega_e_db)?,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let power = db_to_linear(self.p_db);
        let params = SystemParams {
            relays: self.relays as usize,
            links,
            p_source: power,
            p_relay: power,
            sigma2: self.sigma2,
            r1_th: self.r1_th,
            r2_th: self.r2_th,
            r1_s: self.r1_s,
            r2_s: self.r2_s,
        };
        params
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let policy = match (self.alpha1, self.dpa) {
            (Some(a), None) => PowerPolicy::fixed(a, self.alpha_j),
            (None, Some((mu, varpi))) => PowerPolicy::dynamic(mu, varpi, self.alpha_j),
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set only one of `alpha1` and `dpa`".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "one of `alpha1` or `dpa` is required".into(),
                ))
            }
        };
        policy
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(ResolvedPoint {
            params,
            policy,
            eps1: self.eps1,
            eps2: self.eps2,
        })
    }
}

fn positive_integer(key: &str, value: f64) -> Result<u32, CliError> {
    if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as u32)
    } else {
        Err(CliError::Config(format!(
            "{key}: expected a positive integer, got {value}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub sweep: Sweep,
    pub schemes: Vec<SchemeKind>,
    pub engines: Vec<Engine>,
    pub mc: TrialConfig,
    pub quad_n: usize,
    pub out: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Config(e.inner().to_string())
        } else {
            CliError::Config(format!("`{path}`: {}", e.inner()))
        }
    })?;
    build(raw)
}

fn check(ok: bool, key: &str, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{key}`: {}", msg())))
    }
}

fn build(raw: RawConfig) -> Result<ExperimentConfig, CliError> {
    check(raw.K >= 1, "K", || "need at least one relay".into())?;
    for (key, m) in [("mR", raw.mR), ("mU", raw.mU), ("mE", raw.mE)] {
        check(m >= 1, key, || {
            "fading shape must be a positive integer".into()
        })?;
    }
    for (key, v) in [
        ("omegaR_dB", raw.omegaR_dB),
        ("omega1_dB", raw.omega1_dB),
        ("omega2_dB", raw.omega2_dB),
        ("omegaE_dB", raw.omegaE_dB),
        ("P_dB", raw.P_dB),
    ] {
        check(v.is_finite(), key, || format!("must be finite, got {v}"))?;
    }
    check(raw.sigma2 > 0.0, "sigma2", || {
        format!("must be positive, got {}", raw.sigma2)
    })?;
    check(raw.R1_th >= 0.0, "R1_th", || {
        format!("must be nonnegative, got {}", raw.R1_th)
    })?;
    check(raw.R2_th >= 0.0, "R2_th", || {
        format!("must be nonnegative, got {}", raw.R2_th)
    })?;
    check(raw.R1_s > 0.0, "R1_s", || {
        format!("must be positive, got {}", raw.R1_s)
    })?;
    check(raw.R2_s > 0.0, "R2_s", || {
        format!("must be positive, got {}", raw.R2_s)
    })?;
    if let Some(a) = raw.alpha1 {
        check(a > 0.0 && a < 1.0, "alpha1", || {
            format!("alpha1 must be in (0,1), got {a}")
        })?;
    }
    check(raw.alphaJ >= 0.0 && raw.alphaJ < 1.0, "alphaJ", || {
        "alphaJ must be in [0,1)".into()
    })?;
    if let Some(d) = &raw.dpa {
        check(d.mu > 1.0, "dpa.mu", || {
            format!("must exceed 1, got {}", d.mu)
        })?;
        check(d.varpi > 0.0 && d.varpi < 1.0, "dpa.varpi", || {
            format!("must be in (0,1), got {}", d.varpi)
        })?;
    }
    let omega2 = db_to_linear(raw.omega2_dB);
    let eps1 = raw.eps1.unwrap_or(db_to_linear(raw.omega1_dB) / omega2);
    let eps2 = raw.eps2.unwrap_or(db_to_linear(raw.omegaR_dB) / omega2);
    check(eps1 > 0.0 && eps1.is_finite(), "eps1", || {
        format!("must be positive, got {eps1}")
    })?;
    check(eps2 > 0.0 && eps2.is_finite(), "eps2", || {
        format!("must be positive, got {eps2}")
    })?;

    let schemes = if raw.scheme.is_empty() {
        SchemeKind::ALL.to_vec()
    } else {
        let mut v = raw
            .scheme
            .iter()
            .map(|s| {
                s.parse::<SchemeKind>()
                    .map_err(|e| CliError::Config(format!("`scheme`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        v.sort();
        v.dedup();
        v
    };
    let engines = if raw.engine.is_empty() {
        vec![Engine::Analytic]
    } else {
        let mut v = raw
            .engine
            .iter()
            .map(|s| {
                s.parse::<Engine>()
                    .map_err(|e| CliError::Config(format!("`engine`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        v.sort();
        v.dedup();
        v
    };

    let trials = raw.trials.unwrap_or(DEFAULT_TRIALS);
    check(trials >= 1, "trials", || "need at least one trial".into())?;
    let mut mc = TrialConfig::new(trials, raw.seed.unwrap_or(DEFAULT_SEED));
    if let Some(chunk) = raw.chunk {
        check(chunk >= 1, "chunk", || "must be positive".into())?;
        mc.chunk = chunk;
    }
    let quad_n = raw.quad_n.unwrap_or(DEFAULT_QUAD_N);
    check(quad_n >= 1, "quad_n", || "need at least one node".into())?;

    let scenario = Scenario {
        relays: raw.K,
        m_r: raw.mR,
        m_u: raw.mU,
        m_e: raw.mE,
        omega_r_db: raw.omegaR_dB,
        omega1_db: raw.omega1_dB,
        omega2_db: raw.omega2_dB,
        omega_e_db: raw.omegaE_dB,
        p_db: raw.P_dB,
        sigma2: raw.sigma2,
        r1_th: raw.R1_th,
        r2_th: raw.R2_th,
        r1_s: raw.R1_s,
        r2_s: raw.R2_s,
        alpha1: raw.alpha1,
        alpha_j: raw.alphaJ,
        dpa: raw.dpa.map(|d| (d.mu, d.varpi)),
        eps1,
        eps2,
    };
    scenario.resolve()?;

    let sweep = match raw.sweep {
        None => Sweep {
            var: SweepVar::PowerDb,
            values: vec![raw.P_dB],
        },
        Some(s) => {
            let var = s
                .var
                .parse::<SweepVar>()
                .map_err(|e| CliError::Config(format!("`sweep.var`: {e}")))?;
            for &v in &s.values {
                scenario.with(var, v).map_err(|e| match e {
                    CliError::Config(msg) => {
                        CliError::Config(format!("`sweep.values` ({} = {v}): {msg}", var.name()))
                    }
                    other => other,
                })?;
            }
            Sweep {
                var,
                values: s.values,
            }
        }
    };

    Ok(ExperimentConfig {
        scenario,
        sweep,
        schemes,
        engines,
        mc,
        quad_n,
        out: raw.out,
    })
}
