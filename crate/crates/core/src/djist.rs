//! Distributed jointly-sparse recovery by reweighted iterative soft
//! thresholding with support-index messaging.
//!
//! Every round, each node takes a Landweber gradient step, shrinks each
//! component with a threshold rebuilt from its own magnitude and the
//! support votes stored for its neighborhood, and transmits the index of
//! every component whose support bit flipped. Zero components may
//! reactivate at most `p` times, after which they are pinned to zero; this
//! bounds the transient and forces the support to stabilize.
//!
//! Rounds are synchronous: all nodes read the support bits published at the
//! end of the previous round, and messages emitted in a round are delivered
//! at its end. A node's own bit is always read from its current iterate.
//! Within a round nodes touch only their own state, so results do not
//! depend on the order nodes are visited in.

use crate::error::{Error, Result};
use crate::functional::landweber_z;
use crate::graph::Topology;
use crate::ledger::{Algorithm, MessageLedger};
use crate::model::{AlgoParams, ProblemInstance, StopMode, StopRule};
use crate::result::{signs_of, support_of, RunResult, StabilizationReport};
use crate::thresholding::{mcp_weight, soft};
use nalgebra::{DMatrix, DVector};

/// Per-node solver state.
#[derive(Debug, Clone)]
pub struct NodeState {
    /// Current estimate.
    pub x: DVector<f64>,
    /// Indicator of `x`, kept in sync at round boundaries.
    pub support_bits: Vec<bool>,
    /// Last received support bits of each neighbor, aligned with the
    /// topology's sorted neighbor list.
    pub neighbor_bits: Vec<Vec<bool>>,
    /// Zero to non-zero switch count per component.
    pub switch_counts: Vec<u32>,
    /// Whether this node already met its stopping rule.
    pub stopped: bool,
}

/// Initial states: `x_v(0) = A_v^T y_v`, all shared support bits set to one
/// (every coefficient starts active), counters at zero.
pub fn init_states(instance: &ProblemInstance, topology: &Topology) -> Vec<NodeState> {
    (0..instance.num_nodes)
        .map(|v| {
            let x = instance.sensing[v].tr_mul(&instance.measurements[v]);
            NodeState {
                support_bits: support_of(&x),
                x,
                neighbor_bits: vec![vec![true; instance.n]; topology.neighbors(v).len()],
                switch_counts: vec![0; instance.n],
                stopped: false,
            }
        })
        .collect()
}

/// What happened in one synchronous round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundOutcome {
    /// Support-index messages emitted (one per flipped component).
    pub messages: usize,
    /// Zero to non-zero switches in this round.
    pub activations: usize,
    /// Nodes that met their stopping rule in this round.
    pub newly_stopped: usize,
    /// Whether every node has stopped.
    pub all_stopped: bool,
}

/// Synchronous-round simulator. Drive it with [`Simulator::step`] or run it
/// to completion with [`Simulator::run`].
pub struct Simulator<'a> {
    instance: &'a ProblemInstance,
    topology: &'a Topology,
    params: AlgoParams,
    states: Vec<NodeState>,
    /// For each sender: its neighbors paired with the sender's position in
    /// that neighbor's adjacency list.
    delivery: Vec<Vec<(usize, usize)>>,
    ledger: MessageLedger,
    round: u32,
    done: bool,
    last_message_round: Option<u32>,
    last_activation_round: Option<u32>,
    assumption_violations: u64,
}

fn delivery_map(topology: &Topology) -> Vec<Vec<(usize, usize)>> {
    (0..topology.num_nodes())
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
        .collect()
}

fn validate_setup(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> Result<()> {
    params.validate()?;
    if topology.num_nodes() != instance.num_nodes {
        return Err(Error::InvalidDimension(format!(
            "topology has {} nodes but instance has {}",
            topology.num_nodes(),
            instance.num_nodes
        )));
    }
    Ok(())
}

impl<'a> Simulator<'a> {
    /// Builds a simulator, checking the step-size bound
    /// `tau < 1 / max_v ||A_v||_2^2`.
    pub fn new(
        instance: &'a ProblemInstance,
        topology: &'a Topology,
        params: AlgoParams,
    ) -> Result<Self> {
        validate_setup(instance, topology, &params)?;
        let bound = instance.step_size_bound();
        if params.tau >= bound {
            return Err(Error::StepSizeTooLarge {
                tau: params.tau,
                bound,
            });
        }
        Ok(Self::build(instance, topology, params))
    }

    /// Builds a simulator without checking the step-size bound. Descent is
    /// no longer guaranteed; intended for experiments that deliberately
    /// overdrive the step.
    pub fn with_step_size_override(
        instance: &'a ProblemInstance,
        topology: &'a Topology,
        params: AlgoParams,
    ) -> Result<Self> {
        validate_setup(instance, topology, &params)?;
        Ok(Self::build(instance, topology, params))
    }

    fn build(instance: &'a ProblemInstance, topology: &'a Topology, params: AlgoParams) -> Self {
        Simulator {
            states: init_states(instance, topology),
            delivery: delivery_map(topology),
            ledger: MessageLedger::new(instance.num_nodes),
            round: 0,
            done: false,
            last_message_round: None,
            last_activation_round: None,
            assumption_violations: 0,
            instance,
            topology,
            params,
        }
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn params(&self) -> &AlgoParams {
        &self.params
    }

    pub fn ledger(&self) -> &MessageLedger {
        &self.ledger
    }

    /// Whether the run's termination condition has been reached.
    pub fn all_stopped(&self) -> bool {
        self.done
    }

    /// Current network iterate (cloned).
    pub fn iterate(&self) -> Vec<DVector<f64>> {
        self.states.iter().map(|s| s.x.clone()).collect()
    }

    /// The neighborhood support fraction node `v` would use for component
    /// `i` this round: its own current bit plus the stored neighbor bits.
    pub fn mean_indicator_seen(&self, v: usize, i: usize) -> f64 {
        let state = &self.states[v];
        let mut count = (state.x[i] != 0.0) as usize;
        for bits in &state.neighbor_bits {
            count += bits[i] as usize;
        }
        count as f64 / self.topology.degree_inclusive(v) as f64
    }

    /// Executes one synchronous round: update every active node, then
    /// deliver the emitted support messages at the round barrier.
    pub fn step(&mut self) -> RoundOutcome {
        let round = self.round;
        let n = self.instance.n;
        let params = self.params;
        let mut flips: Vec<(usize, usize, bool)> = Vec::new();
        let mut activations = 0;
        let mut newly_stopped = 0;
        let mut quiet_nodes = 0;

        for v in 0..self.instance.num_nodes {
            if self.states[v].stopped {
                quiet_nodes += 1;
                continue;
            }
            let degree = self.topology.degree_inclusive(v) as f64;
            let a = &self.instance.sensing[v];
            let y = &self.instance.measurements[v];
            let state = &mut self.states[v];
            let z = landweber_z(&state.x, a, y, params.tau);

            let mut max_delta = 0.0_f64;
            let mut delta_sq = 0.0_f64;
            for i in 0..n {
                let old = state.x[i];
                let old_abs = old.abs();
                let mut count = (old != 0.0) as usize;
                for bits in &state.neighbor_bits {
                    count += bits[i] as usize;
                }
                let mean_ind = count as f64 / degree;
                if params.alpha * old_abs + mean_ind >= params.beta {
                    self.assumption_violations += 1;
                }
                let w = mcp_weight(old_abs, mean_ind, params.alpha, params.beta);
                let mut new = soft(z[i], params.lambda * params.alpha * w);
                if old == 0.0 {
                    if state.switch_counts[i] >= params.p {
                        new = 0.0;
                    } else if new != 0.0 {
                        state.switch_counts[i] += 1;
                        activations += 1;
                    }
                }
                let new_bit = new != 0.0;
                if new_bit != (old != 0.0) {
                    flips.push((v, i, new_bit));
                }
                let delta = (new - old).abs();
                max_delta = max_delta.max(delta);
                delta_sq += delta * delta;
                state.x[i] = new;
                state.support_bits[i] = new_bit;
            }

            let met = match params.stop_rule {
                StopRule::MaxAbs => max_delta < params.epsilon,
                StopRule::L2 => delta_sq.sqrt() < params.epsilon,
            };
            if met {
                quiet_nodes += 1;
                newly_stopped += 1;
                if params.stop_mode == StopMode::FreezeNodes {
                    state.stopped = true;
                }
            }
        }

        if activations > 0 {
            self.last_activation_round = Some(round);
        }

        // Round barrier: account for and deliver every flipped index.
        for &(sender, index, bit) in &flips {
            let fanout = self.topology.degree_inclusive(sender) - 1;
            self.ledger
                .record_support_index(round, sender, fanout, n);
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
        RoundOutcome {
            messages: flips.len(),
            activations,
            newly_stopped,
            all_stopped: self.done,
        }
    }

    /// Runs rounds until every node stops or the iteration cap is hit.
    pub fn run(mut self) -> RunResult {
        let mut converged = false;
        while self.round < self.params.max_iters {
            if self.step().all_stopped {
                converged = true;
                break;
            }
        }
        self.into_result(converged)
    }

    /// Packs the current state into a [`RunResult`].
    pub fn into_result(self, converged: bool) -> RunResult {
        let t1 = if converged {
            Some(self.last_message_round.map_or(0, |r| r + 1))
        } else {
            None
        };
        let estimates: Vec<DVector<f64>> = self.states.iter().map(|s| s.x.clone()).collect();
        let supports = estimates.iter().map(support_of).collect();
        let signs = estimates.iter().map(signs_of).collect();
        let max_switches = self
            .states
            .iter()
            .flat_map(|s| s.switch_counts.iter().copied())
            .max()
            .unwrap_or(0);
        RunResult {
            algorithm: Algorithm::Djist,
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

/// Runs the full algorithm with validated parameters.
pub fn run_djist(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> Result<RunResult> {
    Ok(Simulator::new(instance, topology, *params)?.run())
}

/// Restriction of `a` to the given columns, in the given order.
pub fn select_columns(a: &DMatrix<f64>, support: &[usize]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), support.len());
    for (j, &c) in support.iter().enumerate() {
        out.set_column(j, &a.column(c));
    }
    out
}

/// Stabilized neighborhood support fraction of every component at node `v`,
/// computed from the final per-node supports.
pub fn stabilized_mean_indicator(
    supports: &[Vec<bool>],
    topology: &Topology,
    v: usize,
) -> Vec<f64> {
    let n = supports[v].len();
    let degree = topology.degree_inclusive(v) as f64;
    (0..n)
        .map(|i| {
            let mut count = supports[v][i] as usize;
            for &u in topology.neighbors(v) {
                count += supports[u][i] as usize;
            }
            count as f64 / degree
        })
        .collect()
}

/// Limit of the post-stabilization iteration on a fixed support: the unique
/// solution of
///
/// `[tau A_S^T A_S - lambda alpha^2 I] x = tau A_S^T y - lambda alpha s (beta - u)`
///
/// where `s` holds the stabilized signs and `u` the stabilized neighborhood
/// support fractions on the support. With the benchmark normalization
/// `lambda = 1` this is the fixed point of the contractive post-transient
/// map.
pub fn fixed_point(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    support: &[usize],
    signs: &[i8],
    mean_indicator_on_support: &[f64],
    params: &AlgoParams,
) -> Result<DVector<f64>> {
    let k_hat = support.len();
    assert_eq!(signs.len(), k_hat);
    assert_eq!(mean_indicator_on_support.len(), k_hat);
    if k_hat == 0 {
        return Ok(DVector::zeros(0));
    }
    let a_s = select_columns(a, support);
    let mut mat = params.tau * a_s.tr_mul(&a_s);
    let shift = params.lambda * params.alpha * params.alpha;
    for i in 0..k_hat {
        mat[(i, i)] -= shift;
    }
    let mut rhs = params.tau * a_s.tr_mul(y);
    for i in 0..k_hat {
        rhs[i] -= params.lambda
            * params.alpha
            * signs[i] as f64
            * (params.beta - mean_indicator_on_support[i]);
    }
    mat.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("fixed-point system is singular".into()))
}

/// One application of the post-stabilization map on a fixed support.
///
/// `region_flags[i]` marks components still inside the penalized region
/// (weight > 0); components outside it follow the plain gradient step.
/// Writing `z` for the Landweber point restricted to the support, the map is
/// `z + D [lambda alpha^2 x - lambda alpha s (beta - u)]` with `D` the
/// diagonal indicator of the flags, i.e. `M(x) x + c(x)` with
/// `M = lambda alpha^2 D + I - tau A_S^T A_S`.
pub fn gamma_step(
    x_on_support: &DVector<f64>,
    a_support: &DMatrix<f64>,
    y: &DVector<f64>,
    signs: &[i8],
    mean_indicator_on_support: &[f64],
    params: &AlgoParams,
    region_flags: &[bool],
) -> DVector<f64> {
    let k_hat = x_on_support.len();
    assert_eq!(a_support.ncols(), k_hat);
    assert_eq!(a_support.nrows(), y.len());
    assert_eq!(signs.len(), k_hat);
    assert_eq!(region_flags.len(), k_hat);
    let mut out = landweber_z(x_on_support, a_support, y, params.tau);
    let la = params.lambda * params.alpha;
    for i in 0..k_hat {
        if region_flags[i] {
            out[i] += la * params.alpha * x_on_support[i]
                - la * signs[i] as f64 * (params.beta - mean_indicator_on_support[i]);
        }
    }
    out
}

/// Fixed-point prediction for node `v` of a finished run: the support it
/// settled on together with the values the iteration must converge to.
/// Returns `None` for an empty support.
pub fn predicted_fixed_point(
    instance: &ProblemInstance,
    topology: &Topology,
    result: &RunResult,
    v: usize,
    params: &AlgoParams,
) -> Result<Option<(Vec<usize>, DVector<f64>)>> {
    let support: Vec<usize> = result.report.supports[v]
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect();
    if support.is_empty() {
        return Ok(None);
    }
    let mean_full = stabilized_mean_indicator(&result.report.supports, topology, v);
    let mean_on: Vec<f64> = support.iter().map(|&i| mean_full[i]).collect();
    let signs_on: Vec<i8> = support.iter().map(|&i| result.report.signs[v][i]).collect();
    let values = fixed_point(
        &instance.sensing[v],
        &instance.measurements[v],
        &support,
        &signs_on,
        &mean_on,
        params,
    )?;
    Ok(Some((support, values)))
}
