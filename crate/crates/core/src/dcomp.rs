//! Greedy baselines: distributed collaborative orthogonal matching pursuit.
//!
//! Both variants run synchronous rounds until every node has built a
//! support of size `k` (the sparsity must be known exactly). Per round,
//! every node proposes the index most correlated with its residual.
//!
//! Variant 1 shares the candidate with the immediate neighbors; indices
//! proposed at least twice within a neighborhood (own candidate included)
//! and not yet in the node's support are adopted, and a node falls back to
//! its own candidate when no shared one qualifies.
//!
//! Variant 2 additionally shares the full correlation vector with the
//! neighbors, picks the candidate from the fused (summed-magnitude)
//! correlations, and broadcasts it network-wide, so the vote runs over all
//! `V` candidates.
//!
//! For exact bit accounting, every node keeps transmitting until the whole
//! network is done; finished nodes simply stop adopting.

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::ledger::{Algorithm, MessageLedger};
use crate::model::{AlgoParams, ProblemInstance};
use crate::result::{signs_of, support_of, RunResult, StabilizationReport};
use nalgebra::{DMatrix, DVector};

/// Per-node pursuit state. The residual always equals `y - A_S x_hat` for
/// the current support `S`.
#[derive(Debug, Clone)]
pub struct OmpNodeState {
    pub residual: DVector<f64>,
    /// Selected indices in insertion order.
    pub support: Vec<usize>,
    /// Least-squares coefficients aligned with `support`.
    pub x_hat: DVector<f64>,
    in_support: Vec<bool>,
}

impl OmpNodeState {
    fn new(y: &DVector<f64>, n: usize) -> Self {
        OmpNodeState {
            residual: y.clone(),
            support: Vec::new(),
            x_hat: DVector::zeros(0),
            in_support: vec![false; n],
        }
    }

    /// Full-length estimate with the coefficients scattered onto the
    /// support.
    pub fn dense_estimate(&self, n: usize) -> DVector<f64> {
        let mut x = DVector::zeros(n);
        for (j, &i) in self.support.iter().enumerate() {
            x[i] = self.x_hat[j];
        }
        x
    }
}

/// Index of the column most correlated with the residual, excluding columns
/// already selected. Ties (including an all-zero residual) resolve to the
/// lowest index.
pub fn omp_candidate(residual: &DVector<f64>, a: &DMatrix<f64>, exclude: &[bool]) -> usize {
    assert_eq!(a.nrows(), residual.len());
    assert_eq!(a.ncols(), exclude.len());
    let mut best = usize::MAX;
    let mut best_corr = f64::NEG_INFINITY;
    for i in 0..a.ncols() {
        if exclude[i] {
            continue;
        }
        let corr = a.column(i).dot(residual).abs();
        if corr > best_corr {
            best_corr = corr;
            best = i;
        }
    }
    assert!(best != usize::MAX, "no admissible column left");
    best
}

/// Least-squares coefficients on the given support via the normal
/// equations.
pub fn least_squares_on_support(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    support: &[usize],
) -> Result<DVector<f64>> {
    let a_s = crate::djist::select_columns(a, support);
    let gram = a_s.tr_mul(&a_s);
    gram.lu()
        .solve(&a_s.tr_mul(y))
        .ok_or_else(|| Error::Singular("support columns are rank deficient".into()))
}

/// Refit used inside the pursuit rounds. Sweeps below the sparsity build
/// supports larger than the rank of `A`, where the normal equations break
/// down; the minimum-norm solution keeps those runs defined.
fn pursuit_refit(a: &DMatrix<f64>, y: &DVector<f64>, support: &[usize]) -> Result<DVector<f64>> {
    if support.len() < a.nrows() {
        if let Ok(coeffs) = least_squares_on_support(a, y, support) {
            return Ok(coeffs);
        }
    }
    let a_s = crate::djist::select_columns(a, support);
    let svd = a_s.svd(true, true);
    svd.solve(y, 1e-12)
        .map_err(|e| Error::Singular(e.to_string()))
}

/// Which pursuit variant to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PursuitVariant {
    /// Candidates shared with neighbors only.
    Local,
    /// Correlation vectors shared locally, candidates broadcast
    /// network-wide.
    Fused,
}

/// Synchronous-round simulator for both pursuit variants.
pub struct GreedySimulator<'a> {
    variant: PursuitVariant,
    instance: &'a ProblemInstance,
    topology: &'a Topology,
    q: u32,
    states: Vec<OmpNodeState>,
    ledger: MessageLedger,
    round: u32,
}

impl<'a> GreedySimulator<'a> {
    pub fn new(
        variant: PursuitVariant,
        instance: &'a ProblemInstance,
        topology: &'a Topology,
        params: &AlgoParams,
    ) -> Result<Self> {
        params.validate()?;
        if topology.num_nodes() != instance.num_nodes {
            return Err(Error::InvalidDimension(format!(
                "topology has {} nodes but instance has {}",
                topology.num_nodes(),
                instance.num_nodes
            )));
        }
        let states = instance
            .measurements
            .iter()
            .map(|y| OmpNodeState::new(y, instance.n))
            .collect();
        Ok(GreedySimulator {
            variant,
            instance,
            topology,
            q: params.q,
            states,
            ledger: MessageLedger::new(instance.num_nodes),
            round: 0,
        })
    }

    pub fn states(&self) -> &[OmpNodeState] {
        &self.states
    }

    pub fn ledger(&self) -> &MessageLedger {
        &self.ledger
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn done(&self) -> bool {
        self.states.iter().all(|s| s.support.len() >= self.instance.k)
    }

    /// Executes one pursuit round; returns whether every node is finished
    /// afterwards.
    pub fn step(&mut self) -> Result<bool> {
        let inst = self.instance;
        let v_count = inst.num_nodes;
        let round = self.round;

        // Candidate selection (and, for the fused variant, correlation
        // sharing).
        let candidates: Vec<usize> = match self.variant {
            PursuitVariant::Local => (0..v_count)
                .map(|v| {
                    omp_candidate(
                        &self.states[v].residual,
                        &inst.sensing[v],
                        &self.states[v].in_support,
                    )
                })
                .collect(),
            PursuitVariant::Fused => {
                let correlations: Vec<DVector<f64>> = (0..v_count)
                    .map(|v| inst.sensing[v].tr_mul(&self.states[v].residual))
                    .collect();
                for v in 0..v_count {
                    let fanout = self.topology.degree_inclusive(v) - 1;
                    self.ledger
                        .record_correlation_vector(round, v, fanout, inst.n, self.q);
                }
                (0..v_count)
                    .map(|v| {
                        let mut fused = correlations[v].abs();
                        for &u in self.topology.neighbors(v) {
                            fused += correlations[u].abs();
                        }
                        let mut best = usize::MAX;
                        let mut best_val = f64::NEG_INFINITY;
                        for i in 0..inst.n {
                            if self.states[v].in_support[i] {
                                continue;
                            }
                            if fused[i] > best_val {
                                best_val = fused[i];
                                best = i;
                            }
                        }
                        best
                    })
                    .collect()
            }
        };

        // Candidate transmission.
        for v in 0..v_count {
            let fanout = match self.variant {
                PursuitVariant::Local => self.topology.degree_inclusive(v) - 1,
                PursuitVariant::Fused => v_count - 1,
            };
            self.ledger
                .record_candidate_index(round, v, fanout, inst.n);
        }

        // Vote and adopt.
        for v in 0..v_count {
            let state = &self.states[v];
            let free = inst.k.saturating_sub(state.support.len());
            if free == 0 {
                continue;
            }
            let mut votes: Vec<u32> = vec![0; inst.n];
            match self.variant {
                PursuitVariant::Local => {
                    votes[candidates[v]] += 1;
                    for &u in self.topology.neighbors(v) {
                        votes[candidates[u]] += 1;
                    }
                }
                PursuitVariant::Fused => {
                    for &c in &candidates {
                        votes[c] += 1;
                    }
                }
            }
            let mut shared: Vec<usize> = (0..inst.n)
                .filter(|&i| votes[i] >= 2 && !state.in_support[i])
                .collect();
            shared.sort_by(|&a, &b| votes[b].cmp(&votes[a]).then(a.cmp(&b)));
            shared.truncate(free);
            if shared.is_empty() {
                shared.push(candidates[v]);
            }

            let state = &mut self.states[v];
            for i in shared {
                state.support.push(i);
                state.in_support[i] = true;
            }
            state.x_hat =
                pursuit_refit(&inst.sensing[v], &inst.measurements[v], &state.support)?;
            let a_s = crate::djist::select_columns(&inst.sensing[v], &state.support);
            state.residual = &inst.measurements[v] - a_s * &state.x_hat;
        }

        self.round += 1;
        Ok(self.done())
    }

    pub fn run(mut self) -> Result<RunResult> {
        while !self.done() {
            self.step()?;
        }
        Ok(self.into_result())
    }

    fn into_result(self) -> RunResult {
        let n = self.instance.n;
        let estimates: Vec<DVector<f64>> =
            self.states.iter().map(|s| s.dense_estimate(n)).collect();
        let supports: Vec<Vec<bool>> = estimates.iter().map(support_of).collect();
        let signs = estimates.iter().map(signs_of).collect();
        let algorithm = match self.variant {
            PursuitVariant::Local => Algorithm::Dcomp1,
            PursuitVariant::Fused => Algorithm::Dcomp2,
        };
        RunResult {
            algorithm,
            estimates,
            rounds: self.round,
            converged: true,
            ledger: self.ledger,
            report: StabilizationReport {
                t1: Some(self.round),
                supports,
                signs,
            },
            max_switches: 0,
            last_activation_round: None,
            assumption_violations: 0,
        }
    }
}

/// Runs the locally-voting pursuit.
pub fn run_dcomp1(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> Result<RunResult> {
    GreedySimulator::new(PursuitVariant::Local, instance, topology, params)?.run()
}

/// Runs the correlation-fusing pursuit with network-wide candidate
/// broadcast.
pub fn run_dcomp2(
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> Result<RunResult> {
    GreedySimulator::new(PursuitVariant::Fused, instance, topology, params)?.run()
}
