//! Experiment configuration: a flat TOML file with exactly the keys below;
//! unknown keys are rejected.
//!
//! ```toml
//! algorithm = "djist"          # djist | djadmm | dcomp1 | dcomp2
//! topology = "regular-5"       # "complete" or "regular-<d>"
//! n = 100
//! k = 10
//! noise_std = 0.0              # optional, defaults to 0
//! m_list = [8, 12, 16]         # sweep over m (requires fixed v) ...
//! v = 10
//! # v_list = [6, 10, 20]       # ... or sweep over v (requires fixed m)
//! # m = 18
//! signal_sets = 10
//! matrices_per_set = 5
//! seed = 42
//! out_dir = "results"          # optional, defaults to "results"
//! # lambda / alpha / beta / tau / epsilon / p / q / max_iters / rho:
//! # optional solver parameters, benchmark defaults when omitted
//! # (alpha defaults to 5e-3 for djadmm, 5e-4 otherwise)
//!
//! # optional per-sweep-point overrides, keyed by the sweep value:
//! # [[overrides]]
//! # value = 6
//! # tau = 3e-3
//! ```

use anyhow::{bail, Context, Result};
use djsparse::{Algorithm, AlgoParams};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algorithm: String,
    topology: String,
    n: usize,
    k: usize,
    noise_std: Option<f64>,
    m_list: Option<Vec<usize>>,
    v_list: Option<Vec<usize>>,
    m: Option<usize>,
    v: Option<usize>,
    signal_sets: usize,
    matrices_per_set: usize,
    seed: u64,
    out_dir: Option<String>,
    lambda: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    tau: Option<f64>,
    epsilon: Option<f64>,
    p: Option<u32>,
    q: Option<u32>,
    max_iters: Option<u32>,
    rho: Option<f64>,
    overrides: Option<Vec<RawOverride>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    value: usize,
    tau: Option<f64>,
    alpha: Option<f64>,
    epsilon: Option<f64>,
}

/// Network shape used for every run of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    Complete,
    /// Self-inclusive degree `d`.
    Regular(usize),
}

impl TopologyKind {
    pub fn label(&self) -> String {
        match self {
            TopologyKind::Complete => "complete".into(),
            TopologyKind::Regular(d) => format!("regular-{d}"),
        }
    }
}

impl FromStr for TopologyKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "complete" {
            return Ok(TopologyKind::Complete);
        }
        if let Some(d) = s.strip_prefix("regular-") {
            let d: usize = d.parse().context("invalid degree in topology")?;
            if d < 2 {
                bail!("regular topology needs degree >= 2 (self-inclusive)");
            }
            return Ok(TopologyKind::Regular(d));
        }
        bail!("unknown topology '{s}' (expected 'complete' or 'regular-<d>')")
    }
}

/// The variable a sweep ranges over; the other dimension stays fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sweep {
    /// Varying measurement count, fixed node count.
    Measurements { m_list: Vec<usize>, v: usize },
    /// Varying node count, fixed measurement count.
    Nodes { v_list: Vec<usize>, m: usize },
}

/// Parameter overrides applied to a single sweep point, keyed by the sweep
/// value (used e.g. for per-point step sizes in node-count sweeps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOverride {
    pub value: usize,
    pub tau: Option<f64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
}

/// One resolved sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub index: usize,
    pub m: usize,
    pub v: usize,
}

/// A fully validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub topology: TopologyKind,
    pub n: usize,
    pub k: usize,
    pub noise_std: f64,
    pub sweep: Sweep,
    pub signal_sets: usize,
    pub matrices_per_set: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub params: AlgoParams,
    pub rho: f64,
    pub overrides: Vec<PointOverride>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).context("failed to parse config")?;
        let algorithm = Algorithm::from_str(&raw.algorithm).map_err(anyhow::Error::msg)?;
        let topology: TopologyKind = raw.topology.parse()?;

        let sweep = match (raw.m_list, raw.v_list) {
            (Some(m_list), None) => {
                if m_list.is_empty() {
                    bail!("m_list must not be empty");
                }
                let v = raw
                    .v
                    .context("sweeping over m requires a fixed node count 'v'")?;
                if raw.m.is_some() {
                    bail!("'m' conflicts with 'm_list'");
                }
                Sweep::Measurements { m_list, v }
            }
            (None, Some(v_list)) => {
                if v_list.is_empty() {
                    bail!("v_list must not be empty");
                }
                let m = raw
                    .m
                    .context("sweeping over v requires a fixed measurement count 'm'")?;
                if raw.v.is_some() {
                    bail!("'v' conflicts with 'v_list'");
                }
                Sweep::Nodes { v_list, m }
            }
            (Some(_), Some(_)) => bail!("exactly one of m_list / v_list must be given, got both"),
            (None, None) => bail!("exactly one of m_list / v_list must be given"),
        };

        if raw.signal_sets == 0 || raw.matrices_per_set == 0 {
            bail!("signal_sets and matrices_per_set must be at least 1");
        }

        let defaults = match algorithm {
            Algorithm::Djadmm => AlgoParams::admm(),
            _ => AlgoParams::default(),
        };
        let params = AlgoParams {
            lambda: raw.lambda.unwrap_or(defaults.lambda),
            alpha: raw.alpha.unwrap_or(defaults.alpha),
            beta: raw.beta.unwrap_or(defaults.beta),
            tau: raw.tau.unwrap_or(defaults.tau),
            epsilon: raw.epsilon.unwrap_or(defaults.epsilon),
            p: raw.p.unwrap_or(defaults.p),
            q: raw.q.unwrap_or(defaults.q),
            max_iters: raw.max_iters.unwrap_or(defaults.max_iters),
            ..defaults
        };
        params.validate().map_err(anyhow::Error::msg)?;
        let rho = raw.rho.unwrap_or(djsparse::djadmm::DEFAULT_RHO);
        if !(rho > 0.0) {
            bail!("rho must be positive");
        }

        let config = ExperimentConfig {
            algorithm,
            topology,
            n: raw.n,
            k: raw.k,
            noise_std: raw.noise_std.unwrap_or(0.0),
            sweep,
            signal_sets: raw.signal_sets,
            matrices_per_set: raw.matrices_per_set,
            seed: raw.seed,
            out_dir: PathBuf::from(raw.out_dir.unwrap_or_else(|| "results".into())),
            params,
            rho,
            overrides: raw
                .overrides
                .unwrap_or_default()
                .iter()
                .map(|o| PointOverride {
                    value: o.value,
                    tau: o.tau,
                    alpha: o.alpha,
                    epsilon: o.epsilon,
                })
                .collect(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("n must be at least 2");
        }
        if self.k == 0 || self.k >= self.n {
            bail!("need 1 <= k < n");
        }
        for point in self.points() {
            if point.m == 0 || point.m >= self.n {
                bail!("measurement count {} out of range (1..n)", point.m);
            }
            if point.v == 0 {
                bail!("node count must be at least 1");
            }
            if let TopologyKind::Regular(d) = self.topology {
                if point.v > 1 && d > point.v {
                    bail!("degree {d} infeasible for {} nodes", point.v);
                }
            }
        }
        Ok(())
    }

    /// Runs per sweep point.
    pub fn runs_per_point(&self) -> usize {
        self.signal_sets * self.matrices_per_set
    }

    /// The resolved list of sweep points.
    pub fn points(&self) -> Vec<SweepPoint> {
        match &self.sweep {
            Sweep::Measurements { m_list, v } => m_list
                .iter()
                .enumerate()
                .map(|(index, &m)| SweepPoint { index, m, v: *v })
                .collect(),
            Sweep::Nodes { v_list, m } => v_list
                .iter()
                .enumerate()
                .map(|(index, &v)| SweepPoint {
                    index,
                    m: *m,
                    v,
                })
                .collect(),
        }
    }

    /// The sweep value (m or v) a point is keyed by in overrides.
    pub fn sweep_value(&self, point: &SweepPoint) -> usize {
        match self.sweep {
            Sweep::Measurements { .. } => point.m,
            Sweep::Nodes { .. } => point.v,
        }
    }

    /// Solver parameters for a sweep point, with overrides applied.
    pub fn params_for(&self, point: &SweepPoint) -> AlgoParams {
        let mut params = self.params;
        let value = self.sweep_value(point);
        if let Some(over) = self.overrides.iter().find(|o| o.value == value) {
            if let Some(tau) = over.tau {
                params.tau = tau;
            }
            if let Some(alpha) = over.alpha {
                params.alpha = alpha;
            }
            if let Some(epsilon) = over.epsilon {
                params.epsilon = epsilon;
            }
        }
        params
    }
}
