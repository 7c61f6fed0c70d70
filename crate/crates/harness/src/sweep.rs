//! Seeded ensemble sweeps with CSV persistence.
//!
//! A sweep is a pure function of (config, master seed): per sweep point,
//! `signal_sets x matrices_per_set` runs are executed, where the signals
//! (and their common support) stay fixed across the matrix draws of a set.
//! Per-run seeds are derived from the master seed, the sweep-point index
//! and the run index, so any single run can be reproduced in isolation.

use crate::config::{ExperimentConfig, SweepPoint, TopologyKind};
use anyhow::{Context, Result};
use djsparse::dcomp::{run_dcomp1, run_dcomp2};
use djsparse::djadmm::run_djadmm_with_rho;
use djsparse::djist::run_djist;
use djsparse::metrics;
use djsparse::model::generate_instance_split;
use djsparse::seeds::derive_seed;
use djsparse::{Algorithm, AlgoParams, ProblemInstance, RunResult, Topology};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

const TAG_POINT: u64 = 0x0A11_0001;
const TAG_SET: u64 = 0x0A11_0002;
const TAG_MATRIX: u64 = 0x0A11_0003;
const TAG_TOPOLOGY: u64 = 0x0A11_0004;

/// One CSV row: the outcome of a single run at a single sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: String,
    pub topology: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "V")]
    pub v: usize,
    pub run_id: usize,
    pub ase: f64,
    pub pesr: f64,
    pub rse: f64,
    pub iterations: u32,
    pub total_bits: u64,
    /// Support stabilization round; -1 when the run ended before it could
    /// be certified.
    pub t1: i64,
    pub converged: bool,
}

/// Seeds of one run, derivable from (master seed, point index, run index).
pub struct RunSeeds {
    pub signal: u64,
    pub matrix: u64,
    pub topology: u64,
}

pub fn run_seeds(master: u64, point_index: usize, set: usize, matrix: usize) -> RunSeeds {
    let p = point_index as u64;
    RunSeeds {
        signal: derive_seed(master, &[TAG_POINT, p, TAG_SET, set as u64]),
        matrix: derive_seed(
            master,
            &[TAG_POINT, p, TAG_SET, set as u64, TAG_MATRIX, matrix as u64],
        ),
        topology: derive_seed(
            master,
            &[
                TAG_POINT,
                p,
                TAG_SET,
                set as u64,
                TAG_MATRIX,
                matrix as u64,
                TAG_TOPOLOGY,
            ],
        ),
    }
}

fn build_topology(kind: TopologyKind, v: usize, seed: u64) -> Result<Topology> {
    if v == 1 {
        return Ok(Topology::singleton());
    }
    let topo = match kind {
        TopologyKind::Complete => Topology::complete(v)?,
        TopologyKind::Regular(d) => Topology::random_regular(v, d, seed)?,
    };
    Ok(topo)
}

/// Halves the step size until it satisfies the contraction bound for this
/// instance, warning on every shrink.
fn fit_step_size(params: &mut AlgoParams, instance: &ProblemInstance) {
    let bound = instance.step_size_bound();
    while params.tau >= bound {
        let old = params.tau;
        params.tau /= 2.0;
        eprintln!(
            "warning: tau = {old} violates the step bound {bound:.6}; shrinking to {}",
            params.tau
        );
    }
}

/// Executes one run of the configured algorithm.
pub fn execute_run(
    config: &ExperimentConfig,
    point: &SweepPoint,
    set: usize,
    matrix: usize,
) -> Result<SweepRow> {
    let seeds = run_seeds(config.seed, point.index, set, matrix);
    let instance = generate_instance_split(
        config.n,
        point.m,
        config.k,
        point.v,
        config.noise_std,
        seeds.signal,
        seeds.matrix,
    )
    .map_err(anyhow::Error::msg)?;
    let topology = build_topology(config.topology, point.v, seeds.topology)?;
    let mut params = config.params_for(point);
    fit_step_size(&mut params, &instance);

    let result: RunResult = match config.algorithm {
        Algorithm::Djist => run_djist(&instance, &topology, &params),
        Algorithm::Djadmm => run_djadmm_with_rho(&instance, &topology, &params, config.rho),
        Algorithm::Dcomp1 => run_dcomp1(&instance, &topology, &params),
        Algorithm::Dcomp2 => run_dcomp2(&instance, &topology, &params),
    }
    .map_err(anyhow::Error::msg)?;
    let report = metrics::report(&instance, &result).map_err(anyhow::Error::msg)?;

    Ok(SweepRow {
        algorithm: config.algorithm.name().into(),
        topology: config.topology.label(),
        n: config.n,
        m: point.m,
        k: config.k,
        v: point.v,
        run_id: set * config.matrices_per_set + matrix,
        ase: report.ase,
        pesr: report.pesr,
        rse: report.rse,
        iterations: result.rounds,
        total_bits: result.total_bits(),
        t1: result.t1().map_or(-1, i64::from),
        converged: result.converged,
    })
}

/// Runs the full sweep. Runs are independent and execute on the rayon
/// worker pool; rows come back ordered by (sweep point, run id) regardless
/// of scheduling.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let mut jobs = Vec::new();
    for point in config.points() {
        for set in 0..config.signal_sets {
            for matrix in 0..config.matrices_per_set {
                jobs.push((point, set, matrix));
            }
        }
    }
    jobs.par_iter()
        .map(|(point, set, matrix)| execute_run(config, point, *set, *matrix))
        .collect()
}

/// Runs the sweep and persists it as `results.csv` under the config's
/// output directory (atomically: written to a temp file, then renamed).
pub fn run_sweep_to_csv(config: &ExperimentConfig) -> Result<(Vec<SweepRow>, std::path::PathBuf)> {
    let rows = run_sweep(config)?;
    std::fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("cannot create {}", config.out_dir.display()))?;
    let path = config.out_dir.join("results.csv");
    write_rows(&path, &rows)?;
    Ok((rows, path))
}

/// Serializes rows to CSV (UTF-8, comma delimiter, header row).
pub fn rows_to_csv(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(writer.into_inner()?)
}

/// Writes rows atomically: the file never holds a partial sweep.
pub fn write_rows(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let bytes = rows_to_csv(rows)?;
    let tmp = path.with_extension("csv.tmp");
    std::fs::write(&tmp, &bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move sweep into place at {}", path.display()))?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}
