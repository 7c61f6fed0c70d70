//! ADMM variant: the thresholding update is replaced by one ADMM step on
//! the node-local weighted lasso, while the support messaging, the switch
//! cap and the stopping machinery stay identical to the thresholding
//! solver.
//!
//! The splitting variable `z` carries the sparsity: support bits, weights,
//! messages and the stopping rule are all driven by `z`, since the ridge
//! update leaves `x` generically dense. Components pinned by the switch cap
//! are expressed through an infinite threshold, which keeps the three ADMM
//! updates internally consistent.

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::ledger::{Algorithm, MessageLedger};
use crate::model::{AlgoParams, ProblemInstance, StopMode, StopRule};
use crate::result::{signs_of, support_of, RunResult, StabilizationReport};
use crate::thresholding::{mcp_weight, soft};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Default augmented-Lagrangian penalty.
pub const DEFAULT_RHO: f64 = 1.0;

/// Per-node ADMM state with the cached factorization of `A^T A + rho I`.
pub struct AdmmNodeState {
    /// Ridge-update variable (generically dense).
    pub x: DVector<f64>,
    /// Splitting variable; carries the sparsity and the support estimate.
    pub z: DVector<f64>,
    /// Scaled dual variable.
    pub mu: DVector<f64>,
    pub rho: f64,
    /// Indicator of `z`, kept in sync at round boundaries.
    pub support_bits: Vec<bool>,
    /// Last received support bits per neighbor (topology order).
    pub neighbor_bits: Vec<Vec<bool>>,
    pub switch_counts: Vec<u32>,
    pub stopped: bool,
    factor: Cholesky<f64, Dyn>,
    aty: DVector<f64>,
}

impl AdmmNodeState {
    /// Builds the state for one node: `x = z = A^T y`, `mu = 0`, and the
    /// Cholesky factor of `A^T A + rho I` computed once.
    pub fn new(a: &DMatrix<f64>, y: &DVector<f64>, rho: f64, num_neighbors: usize) -> Self {
        assert!(rho > 0.0, "rho must be positive");
        let n = a.ncols();
        let mut gram = a.tr_mul(a);
        for i in 0..n {
            gram[(i, i)] += rho;
        }
        let factor = Cholesky::new(gram).expect("A^T A + rho I is positive definite");
        let aty = a.tr_mul(y);
        let z = aty.clone();
        AdmmNodeState {
            x: aty.clone(),
            support_bits: support_of(&z),
            z,
            mu: DVector::zeros(n),
            rho,
            neighbor_bits: vec![vec![true; n]; num_neighbors],
            switch_counts: vec![0; n],
            stopped: false,
            factor,
            aty,
        }
    }
}

/// One ADMM step on the weighted lasso of a single node:
///
/// * `x <- (A^T A + rho I)^{-1} [A^T y + rho (z - mu)]`
/// * `z <- soft(x + mu, lambda alpha w / rho)` component-wise
/// * `mu <- mu + x - z`
///
/// An infinite weight pins the corresponding `z` component to zero.
pub fn admm_node_step(state: &mut AdmmNodeState, w: &[f64], params: &AlgoParams) {
    let rhs = &state.aty + state.rho * (&state.z - &state.mu);
    state.x = state.factor.solve(&rhs);
    let shrink_scale = params.lambda * params.alpha / state.rho;
    let u = &state.x + &state.mu;
    state.z = DVector::from_fn(u.len(), |i, _| {
        if w[i].is_infinite() {
            0.0
        } else {
            soft(u[i], shrink_scale * w[i])
        }
    });
    state.mu = &state.mu + &state.x - &state.z;
}

/// Synchronous-round simulator for the ADMM variant.
pub struct AdmmSimulator<'a> {
    instance: &'a ProblemInstance,
    topology: &'a Topology,
    params: AlgoParams,
    states: Vec<AdmmNodeState>,
    delivery: Vec<Vec<(usize, usize)>>,
    ledger: MessageLedger,
    round: u32,
    done: bool,
    last_message_round: Option<u32>,
    last_activation_round: Option<u32>,
    assumption_violations: u64,
}

impl<'a> AdmmSimulator<'a> {
    pub fn new(
        instance: &'a ProblemInstance,
        topology: &'a Topology,
        params: AlgoParams,
        rho: f64,
    ) -> Result<Self> {
        params.validate()?;
        if topology.num_nodes() != instance.num_nodes {
            return Err(Error::InvalidDimension(format!(
                "topology has {} nodes but instance has {}",
                topology.num_nodes(),
                instance.num_nodes
            )));
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidParam(format!("rho must be positive, got {rho}")));
        }
        let states = (0..instance.num_nodes)
            .map(|v| {
                AdmmNodeState::new(
                    &instance.sensing[v],
                    &instance.measurements[v],
                    rho,
                    topology.neighbors(v).len(),
                )
            })
            .collect();
        let delivery = (0..topology.num_nodes())
            .map(|v| {
                topology
                    .neighbors(v)
                    .iter()
                    .map(|&u| {
                        let pos = topology
                            .neighbors(u)
                            .binary_search(&v)
                            .expect("adjacency must be symmetric");
                        (u, pos)
                    })
                    .collect()
            })
            .collect();
        Ok(AdmmSimulator {
            instance,
            topology,
            params,
            states,
            delivery,
            ledger: MessageLedger::new(instance.num_nodes),
            round: 0,
            done: false,
            last_message_round: None,
            last_activation_round: None,
            assumption_violations: 0,
        })
    }

    pub fn states(&self) -> &[AdmmNodeState] {
        &self.states
    }

    pub fn ledger(&self) -> &MessageLedger {
        &self.ledger
    }

    /// Whether the run's termination condition has been reached.
    pub fn all_stopped(&self) -> bool {
        self.done
    }

    /// Executes one synchronous round over all active nodes.
    pub fn step(&mut self) -> u32 {
        let round = self.round;
        let n = self.instance.n;
        let params = self.params;
        let mut flips: Vec<(usize, usize, bool)> = Vec::new();
        let mut activations = 0u32;
        let mut quiet_nodes = 0;

        for v in 0..self.instance.num_nodes {
            if self.states[v].stopped {
                quiet_nodes += 1;
                continue;
            }
            let degree = self.topology.degree_inclusive(v) as f64;
            let state = &mut self.states[v];

            let mut weights = vec![0.0_f64; n];
            let old_z = state.z.clone();
            for i in 0..n {
                let zi_abs = old_z[i].abs();
                let mut count = (old_z[i] != 0.0) as usize;
                for bits in &state.neighbor_bits {
                    count += bits[i] as usize;
                }
                let mean_ind = count as f64 / degree;
                if params.alpha * zi_abs + mean_ind >= params.beta {
                    self.assumption_violations += 1;
                }
                weights[i] = if old_z[i] == 0.0 && state.switch_counts[i] >= params.p {
                    f64::INFINITY
                } else {
                    mcp_weight(zi_abs, mean_ind, params.alpha, params.beta)
                };
            }

            admm_node_step(state, &weights, &params);

            let mut max_delta = 0.0_f64;
            let mut delta_sq = 0.0_f64;
            for i in 0..n {
                let old = old_z[i];
                let new = state.z[i];
                if old == 0.0 && new != 0.0 {
                    state.switch_counts[i] += 1;
                    activations += 1;
                }
                let new_bit = new != 0.0;
                if new_bit != (old != 0.0) {
                    flips.push((v, i, new_bit));
                }
                let delta = (new - old).abs();
                max_delta = max_delta.max(delta);
                delta_sq += delta * delta;
                state.support_bits[i] = new_bit;
            }

            let met = match params.stop_rule {
                StopRule::MaxAbs => max_delta < params.epsilon,
                StopRule::L2 => delta_sq.sqrt() < params.epsilon,
            };
            if met {
                quiet_nodes += 1;
                if params.stop_mode == StopMode::FreezeNodes {
                    state.stopped = true;
                }
            }
        }

        if activations > 0 {
            self.last_activation_round = Some(round);
        }
        for &(sender, index, bit) in &flips {
            let fanout = self.topology.degree_inclusive(sender) - 1;
            self.ledger.record_support_index(round, sender, fanout, n);
            for &(receiver, pos) in &self.delivery[sender] {
                self.states[receiver].neighbor_bits[pos][index] = bit;
            }
        }
        if !flips.is_empty() {
            self.last_message_round = Some(round);
        }
        self.round += 1;
        if quiet_nodes == self.instance.num_nodes {
            self.done = true;
        }
        flips.len() as u32
    }

    pub fn run(mut self) -> RunResult {
        let mut converged = false;
        while self.round < self.params.max_iters {
            self.step();
            if self.done {
                converged = true;
                break;
            }
        }
        self.into_result(converged)
    }

    fn into_result(self, converged: bool) -> RunResult {
        let t1 = if converged {
            Some(self.last_message_round.map_or(0, |r| r + 1))
        } else {
            None
        };
        let estimates: Vec<DVector<f64>> = self.states.iter().map(|s| s.z.clone()).collect();
        let supports = estimates.iter().map(support_of).collect();
        let signs = estimates.iter().map(signs_of).collect();
        let max_switches = self
            .states
            .iter()
            .flat_map(|s| s.switch_counts.iter().copied())
            .max()
            .unwrap_or(0);
        RunResult {
            algorithm: Algorithm::Djadmm,
            estimates,
            rounds: self.round,
            converged,
            ledger: self.ledger,
            report: StabilizationReport {
                t1,
                supports,
                signs,
            },
            max_switches,
            last_activation_round: self.last_activation_round,
            assumption_violations: self.assumption_violations,
        }
    }
}

/// Runs the ADMM variant with the default penalty `rho = 1`.
pub fn run_djadmm(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> Result<RunResult> {
    run_djadmm_with_rho(instance, topology, params, DEFAULT_RHO)
}

pub fn run_djadmm_with_rho(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
    rho: f64,
) -> Result<RunResult> {
    Ok(AdmmSimulator::new(instance, topology, *params, rho)?.run())
}
