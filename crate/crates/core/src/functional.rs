//! Evaluation of the network objective, its surrogate, and reference
//! quantities (Landweber point, lasso objective).
//!
//! These evaluators recompute everything from the given iterate on every
//! call; they exist for descent monitoring and oracle tests, not for the
//! solver hot path.

use crate::graph::Topology;
use crate::model::{AlgoParams, ProblemInstance};
use crate::thresholding::mcp_g;
use nalgebra::{DMatrix, DVector};

/// One iterate of the whole network: a length-`n` vector per node.
pub type NetworkIterate = Vec<DVector<f64>>;

/// Fraction of nodes in the self-inclusive neighborhood of `v` whose
/// component `i` is non-zero. Indicators use exact comparison with zero.
pub fn mean_indicator(x_all: &[DVector<f64>], topology: &Topology, v: usize, i: usize) -> f64 {
    let mut count = (x_all[v][i] != 0.0) as usize;
    for &u in topology.neighbors(v) {
        count += (x_all[u][i] != 0.0) as usize;
    }
    count as f64 / topology.degree_inclusive(v) as f64
}

/// Global objective: sum over nodes of the residual term plus the MCP
/// penalty of `alpha * |x_{v,i}| + mean_indicator(v, i)`.
pub fn eval_f(
    x_all: &[DVector<f64>],
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> f64 {
    assert_eq!(x_all.len(), instance.num_nodes);
    assert_eq!(topology.num_nodes(), instance.num_nodes);
    let mut total = 0.0;
    for v in 0..instance.num_nodes {
        let residual = &instance.measurements[v] - &instance.sensing[v] * &x_all[v];
        total += 0.5 * residual.norm_squared();
        let mut penalty = 0.0;
        for i in 0..instance.n {
            let arg = params.alpha * x_all[v][i].abs() + mean_indicator(x_all, topology, v, i);
            penalty += mcp_g(arg, params.beta);
        }
        total += params.lambda * penalty;
    }
    total
}

/// Landweber point `z = x + tau * A^T (y - A x)`.
pub fn landweber_z(x: &DVector<f64>, a: &DMatrix<f64>, y: &DVector<f64>, tau: f64) -> DVector<f64> {
    assert_eq!(a.ncols(), x.len());
    assert_eq!(a.nrows(), y.len());
    x + tau * a.tr_mul(&(y - a * x))
}

/// Surrogate functional `R(X, B) = F(X) + (1/2) sum_v [ (1/tau)||x_v - b_v||^2
/// - ||A_v (x_v - b_v)||^2 ]`. Satisfies `R(X, X) = F(X)` and majorizes `F`
/// whenever `tau < ||A_v||_2^{-2}` for all nodes.
pub fn eval_surrogate(
    x_all: &[DVector<f64>],
    b_all: &[DVector<f64>],
    instance: &ProblemInstance,
    topology: &Topology,
    params: &AlgoParams,
) -> f64 {
    assert_eq!(x_all.len(), b_all.len());
    let mut total = eval_f(x_all, instance, topology, params);
    for v in 0..instance.num_nodes {
        let diff = &x_all[v] - &b_all[v];
        total += 0.5
            * (diff.norm_squared() / params.tau
                - (&instance.sensing[v] * diff).norm_squared());
    }
    total
}

/// Lasso objective `0.5 ||y - A x||^2 + lambda ||x||_1`.
pub fn eval_lasso(x: &DVector<f64>, a: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> f64 {
    assert_eq!(a.ncols(), x.len());
    assert_eq!(a.nrows(), y.len());
    0.5 * (y - a * x).norm_squared() + lambda * x.iter().map(|xi| xi.abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate_instance;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_iterate(n: usize, num_nodes: usize, seed: u64) -> NetworkIterate {
        let mut rng = crate::seeds::rng_from(seed);
        (0..num_nodes)
            .map(|_| {
                DVector::from_fn(n, |_, _| {
                    if rng.random_bool(0.3) {
                        0.0
                    } else {
                        rng.random_range(-2.0..2.0)
                    }
                })
            })
            .collect()
    }

    #[test]
    fn mean_indicator_examples() {
        let topo = Topology::complete(4).unwrap();
        let mut x_all = vec![DVector::zeros(3); 4];
        assert_eq!(mean_indicator(&x_all, &topo, 0, 1), 0.0);
        for x in x_all.iter_mut() {
            x[1] = 1.0;
        }
        assert_eq!(mean_indicator(&x_all, &topo, 0, 1), 1.0);
        x_all[2][1] = 0.0;
        x_all[3][1] = 0.0;
        assert_eq!(mean_indicator(&x_all, &topo, 0, 1), 0.5);
    }

    #[test]
    fn eval_f_at_zero_is_half_energy() {
        let inst = generate_instance(10, 5, 2, 3, 0.0, 4).unwrap();
        let topo = Topology::complete(3).unwrap();
        let zero = vec![DVector::zeros(10); 3];
        let expected: f64 = inst
            .measurements
            .iter()
            .map(|y| 0.5 * y.norm_squared())
            .sum();
        assert_relative_eq!(
            eval_f(&zero, &inst, &topo, &AlgoParams::default()),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn eval_f_saturated_truth() {
        // Hand-built instance whose support values are deep in the MCP
        // saturation region, so each support component contributes beta^2/2.
        let params = AlgoParams::default();
        let n = 6;
        let k = 2;
        let num_nodes = 3;
        let mut inst = generate_instance(n, 4, k, num_nodes, 0.0, 5).unwrap();
        for v in 0..num_nodes {
            let mut x = DVector::zeros(n);
            for (j, &i) in inst.true_support.iter().enumerate() {
                x[i] = 300.0 * if j % 2 == 0 { 1.0 } else { -1.0 };
            }
            inst.measurements[v] = &inst.sensing[v] * &x;
            inst.x_star[v] = x;
        }
        let topo = Topology::complete(num_nodes).unwrap();
        let f = eval_f(&inst.x_star, &inst, &topo, &params);
        let expected = num_nodes as f64 * params.lambda * k as f64 * 0.5 * params.beta * params.beta;
        assert_relative_eq!(f, expected, epsilon = 1e-9);
    }

    #[test]
    fn eval_f_matches_term_by_term_oracle() {
        // Independent transliteration with explicit scalar loops.
        let inst = generate_instance(6, 4, 2, 3, 0.0, 21).unwrap();
        let topo = Topology::complete(3).unwrap();
        let params = AlgoParams::default();
        let x_all = random_iterate(6, 3, 99);

        let mut oracle = 0.0;
        for v in 0..3 {
            let a = &inst.sensing[v];
            let y = &inst.measurements[v];
            for r in 0..4 {
                let mut dot = 0.0;
                for c in 0..6 {
                    dot += a[(r, c)] * x_all[v][c];
                }
                oracle += 0.5 * (y[r] - dot) * (y[r] - dot);
            }
            for i in 0..6 {
                let mut cnt = 0.0;
                for u in 0..3 {
                    if x_all[u][i] != 0.0 {
                        cnt += 1.0;
                    }
                }
                let arg = params.alpha * x_all[v][i].abs() + cnt / 3.0;
                let g = if arg < params.beta {
                    params.beta * arg - 0.5 * arg * arg
                } else {
                    0.5 * params.beta * params.beta
                };
                oracle += params.lambda * g;
            }
        }
        assert_relative_eq!(eval_f(&x_all, &inst, &topo, &params), oracle, epsilon = 1e-12);
    }

    #[test]
    fn landweber_examples() {
        let inst = generate_instance(8, 4, 2, 1, 0.0, 13).unwrap();
        let a = &inst.sensing[0];
        let y = &inst.measurements[0];
        let tau = 0.02;

        let zero = DVector::zeros(8);
        let z = landweber_z(&zero, a, y, tau);
        assert_relative_eq!((z - tau * a.tr_mul(y)).norm(), 0.0, epsilon = 1e-14);

        // orthogonal square A with tau = 1 lands exactly on the solution
        let eye = DMatrix::<f64>::identity(4, 4);
        let xs = DVector::from_vec(vec![1.0, -2.0, 0.0, 3.0]);
        let z = landweber_z(&DVector::zeros(4), &eye, &xs, 1.0);
        assert_relative_eq!((z - xs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn landweber_matches_naive_loops() {
        let inst = generate_instance(8, 4, 2, 1, 0.0, 55).unwrap();
        let a = &inst.sensing[0];
        let y = &inst.measurements[0];
        let x = DVector::from_fn(8, |i, _| (i as f64).sin());
        let tau = 0.05;
        let z = landweber_z(&x, a, y, tau);
        for i in 0..8 {
            let mut acc = x[i];
            for r in 0..4 {
                let mut ax = 0.0;
                for c in 0..8 {
                    ax += a[(r, c)] * x[c];
                }
                acc += tau * a[(r, i)] * (y[r] - ax);
            }
            assert_relative_eq!(z[i], acc, epsilon = 1e-12);
        }
    }

    #[test]
    fn surrogate_equals_f_on_diagonal() {
        let inst = generate_instance(6, 4, 2, 3, 0.0, 8).unwrap();
        let topo = Topology::complete(3).unwrap();
        let params = AlgoParams::default();
        for seed in 0..5 {
            let x_all = random_iterate(6, 3, seed);
            let f = eval_f(&x_all, &inst, &topo, &params);
            let r = eval_surrogate(&x_all, &x_all, &inst, &topo, &params);
            assert_relative_eq!(f, r, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn surrogate_majorizes_f_under_step_bound() {
        let inst = generate_instance(6, 4, 2, 3, 0.0, 8).unwrap();
        let topo = Topology::complete(3).unwrap();
        let mut params = AlgoParams::default();
        params.tau = 0.9 * inst.step_size_bound();
        for seed in 0..100 {
            let x_all = random_iterate(6, 3, 2 * seed);
            let b_all = random_iterate(6, 3, 2 * seed + 1);
            let f = eval_f(&x_all, &inst, &topo, &params);
            let r = eval_surrogate(&x_all, &b_all, &inst, &topo, &params);
            assert!(r >= f - 1e-10, "surrogate fell below F at seed {seed}");
        }
    }

    #[test]
    fn f_is_invariant_under_node_relabeling() {
        let inst = generate_instance(6, 4, 2, 4, 0.0, 3).unwrap();
        let topo = Topology::complete(4).unwrap();
        let params = AlgoParams::default();
        let x_all = random_iterate(6, 4, 17);
        let f = eval_f(&x_all, &inst, &topo, &params);

        // rotate every per-node array by one position
        let perm = [1, 2, 3, 0];
        let permuted_inst = ProblemInstance {
            x_star: perm.iter().map(|&v| inst.x_star[v].clone()).collect(),
            sensing: perm.iter().map(|&v| inst.sensing[v].clone()).collect(),
            measurements: perm.iter().map(|&v| inst.measurements[v].clone()).collect(),
            ..inst.clone()
        };
        let permuted_x: Vec<_> = perm.iter().map(|&v| x_all[v].clone()).collect();
        let f_perm = eval_f(&permuted_x, &permuted_inst, &topo, &params);
        assert_relative_eq!(f, f_perm, epsilon = 1e-12, max_relative = 1e-12);
    }

    #[test]
    fn lasso_examples_and_oracle() {
        let inst = generate_instance(8, 4, 2, 1, 0.0, 30).unwrap();
        let a = &inst.sensing[0];
        let y = &inst.measurements[0];

        let zero = DVector::zeros(8);
        assert_relative_eq!(
            eval_lasso(&zero, a, y, 1.0),
            0.5 * y.norm_squared(),
            epsilon = 1e-12
        );

        let x = DVector::from_fn(8, |i, _| 0.3 * (i as f64) - 1.0);
        assert_relative_eq!(
            eval_lasso(&x, a, y, 0.0),
            0.5 * (y - a * &x).norm_squared(),
            epsilon = 1e-12
        );

        let mut oracle = 0.0;
        for r in 0..4 {
            let mut dot = 0.0;
            for c in 0..8 {
                dot += a[(r, c)] * x[c];
            }
            oracle += 0.5 * (y[r] - dot) * (y[r] - dot);
        }
        for c in 0..8 {
            oracle += 0.7 * x[c].abs();
        }
        assert_relative_eq!(eval_lasso(&x, a, y, 0.7), oracle, epsilon = 1e-12);
    }
}
