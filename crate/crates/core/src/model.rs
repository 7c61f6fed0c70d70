//! Problem instances and the measurement model.
//!
//! An instance holds, for each of `V` nodes, a jointly sparse ground-truth
//! signal (common support, node-specific Gaussian values), a dense Gaussian
//! sensing matrix with entries scaled by `1/sqrt(m)`, and the noiseless or
//! noisy measurements `y_v = A_v x*_v + g`.

use crate::error::{Error, Result};
use crate::seeds::{derive_seed, rng_from};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

const TAG_SUPPORT: u64 = 0x5EED_0001;
const TAG_VALUES: u64 = 0x5EED_0002;
const TAG_MATRIX: u64 = 0x5EED_0003;
const TAG_NOISE: u64 = 0x5EED_0004;
const TAG_SIGNALS_STREAM: u64 = 0x5EED_0005;
const TAG_MATRIX_STREAM: u64 = 0x5EED_0006;

/// Solver parameters shared by all algorithms. `q` is used by the bit
/// accounting only; arithmetic always runs at full precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoParams {
    /// Penalty scale.
    pub lambda: f64,
    /// Magnitude weight inside the penalty argument.
    pub alpha: f64,
    /// MCP saturation threshold.
    pub beta: f64,
    /// Gradient step size; must stay below `1 / max_v ||A_v||_2^2`.
    pub tau: f64,
    /// Per-component stopping tolerance.
    pub epsilon: f64,
    /// Maximum zero to non-zero switches per component.
    pub p: u32,
    /// Bits per quantized real in the accounting model.
    pub q: u32,
    /// Safety cap on the number of rounds.
    pub max_iters: u32,
    /// Which per-node stopping rule to apply.
    pub stop_rule: StopRule,
    /// How the stopping rule ends the run.
    pub stop_mode: StopMode,
}

/// Per-node stopping rule. The benchmark setting uses the per-component
/// form; the l2 form is available for completeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Stop when `max_i |x_i(t+1) - x_i(t)| < epsilon`.
    MaxAbs,
    /// Stop when `||x(t+1) - x(t)||_2 < epsilon`.
    L2,
}

/// How the per-node stopping rule ends a run.
///
/// Freezing a node mid-run leaves its support votes permanently stale,
/// which measurably degrades the recovery of its still-active neighbors
/// (components teetering at the dead-zone edge get locked in). The global
/// mode therefore keeps every node live until all of them satisfy the rule
/// in the same round, and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    /// The run ends at the first round in which every node meets the rule
    /// simultaneously; no node freezes early.
    Global,
    /// Each node freezes its iterate as soon as it meets the rule and only
    /// keeps receiving; the run ends when all nodes have frozen.
    FreezeNodes,
}

impl Default for AlgoParams {
    /// Benchmark defaults: `lambda = 1`, `alpha = 5e-4`, `beta = 1.1`,
    /// `tau = 2e-2`, `epsilon = 1e-5`, `p = 20`, `q = 16`.
    fn default() -> Self {
        AlgoParams {
            lambda: 1.0,
            alpha: 5e-4,
            beta: 1.1,
            tau: 2e-2,
            epsilon: 1e-5,
            p: 20,
            q: 16,
            max_iters: 50_000,
            stop_rule: StopRule::MaxAbs,
            stop_mode: StopMode::Global,
        }
    }
}

impl AlgoParams {
    /// Benchmark defaults for the ADMM variant, which runs with a larger
    /// magnitude weight (`alpha = 5e-3`).
    pub fn admm() -> Self {
        AlgoParams {
            alpha: 5e-3,
            ..AlgoParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("tau", self.tau),
            ("epsilon", self.epsilon),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        for (name, value) in [("p", self.p), ("q", self.q), ("max_iters", self.max_iters)] {
            if value == 0 {
                return Err(Error::InvalidParam(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Ground truth, sensing matrices and measurements for all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    /// Ambient dimension.
    pub n: usize,
    /// Measurements per node.
    pub m: usize,
    /// Sparsity (size of the common support).
    pub k: usize,
    /// Node count `V`.
    pub num_nodes: usize,
    /// Common support, sorted ascending.
    pub true_support: Vec<usize>,
    /// Ground-truth signals, one per node, exactly `k` non-zeros on the
    /// common support.
    pub x_star: Vec<DVector<f64>>,
    /// Sensing matrices `A_v` (m x n), entries i.i.d. N(0, 1/m).
    pub sensing: Vec<DMatrix<f64>>,
    /// Measurements `y_v`.
    pub measurements: Vec<DVector<f64>>,
    pub noise_std: f64,
    /// Seed of the signal stream (support and non-zero values).
    pub signal_seed: u64,
    /// Seed of the matrix stream (sensing entries and noise).
    pub matrix_seed: u64,
}

impl ProblemInstance {
    /// Indicator of the common support as a length-`n` boolean vector.
    pub fn support_indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.n];
        for &i in &self.true_support {
            ind[i] = true;
        }
        ind
    }

    /// `max_v ||A_v||_2^2`, the quantity the step size is validated against.
    pub fn max_spectral_norm_sq(&self) -> f64 {
        self.sensing
            .iter()
            .map(spectral_norm_sq)
            .fold(0.0, f64::max)
    }

    /// Largest admissible gradient step `1 / max_v ||A_v||_2^2`.
    pub fn step_size_bound(&self) -> f64 {
        1.0 / self.max_spectral_norm_sq()
    }
}

/// Generates an instance with support, signals and matrices all derived
/// from one seed. See [`generate_instance_split`] for the two-stream form
/// used by ensemble sweeps that fix the signals while re-drawing matrices.
pub fn generate_instance(
    n: usize,
    m: usize,
    k: usize,
    num_nodes: usize,
    noise_std: f64,
    seed: u64,
) -> Result<ProblemInstance> {
    generate_instance_split(
        n,
        m,
        k,
        num_nodes,
        noise_std,
        derive_seed(seed, &[TAG_SIGNALS_STREAM]),
        derive_seed(seed, &[TAG_MATRIX_STREAM]),
    )
}

/// Generates an instance from separate signal and matrix streams.
///
/// The support is drawn uniformly without replacement, non-zero values are
/// i.i.d. standard normal per node (no minimum-magnitude floor), matrix
/// entries are standard normal divided by `sqrt(m)`, filled row-major.
/// Deterministic given the two seeds.
pub fn generate_instance_split(
    n: usize,
    m: usize,
    k: usize,
    num_nodes: usize,
    noise_std: f64,
    signal_seed: u64,
    matrix_seed: u64,
) -> Result<ProblemInstance> {
    // Well-posed recovery needs k <= m, but the benchmark sweeps
    // deliberately include measurement counts below the sparsity, so only
    // the structural bounds are enforced here.
    if !(k >= 1 && k <= n && m >= 1 && m < n) {
        return Err(Error::InvalidDimension(format!(
            "need 1 <= k <= n and 1 <= m < n, got k={k}, m={m}, n={n}"
        )));
    }
    if num_nodes < 1 {
        return Err(Error::InvalidDimension("need at least one node".into()));
    }
    if noise_std < 0.0 {
        return Err(Error::InvalidParam(format!(
            "noise_std must be nonnegative, got {noise_std}"
        )));
    }

    let mut support_rng = rng_from(derive_seed(signal_seed, &[TAG_SUPPORT]));
    let mut true_support = rand::seq::index::sample(&mut support_rng, n, k).into_vec();
    true_support.sort_unstable();

    let scale = 1.0 / (m as f64).sqrt();
    let mut x_star = Vec::with_capacity(num_nodes);
    let mut sensing = Vec::with_capacity(num_nodes);
    let mut measurements = Vec::with_capacity(num_nodes);
    for v in 0..num_nodes {
        let mut value_rng = rng_from(derive_seed(signal_seed, &[TAG_VALUES, v as u64]));
        let mut x = DVector::zeros(n);
        for &i in &true_support {
            x[i] = value_rng.sample::<f64, _>(StandardNormal);
        }

        let mut matrix_rng = rng_from(derive_seed(matrix_seed, &[TAG_MATRIX, v as u64]));
        let mut entries = Vec::with_capacity(m * n);
        for _ in 0..m * n {
            entries.push(matrix_rng.sample::<f64, _>(StandardNormal) * scale);
        }
        let a = DMatrix::from_row_slice(m, n, &entries);

        let mut noise_rng = rng_from(derive_seed(matrix_seed, &[TAG_NOISE, v as u64]));
        let y = measure(&a, &x, noise_std, &mut noise_rng)?;

        x_star.push(x);
        sensing.push(a);
        measurements.push(y);
    }

    Ok(ProblemInstance {
        n,
        m,
        k,
        num_nodes,
        true_support,
        x_star,
        sensing,
        measurements,
        noise_std,
        signal_seed,
        matrix_seed,
    })
}

/// Measurement model `y = A x + g` with `g ~ N(0, noise_std^2 I)`; the noise
/// term is identically zero (and the RNG untouched) when `noise_std = 0`.
pub fn measure<R: Rng>(
    a: &DMatrix<f64>,
    x: &DVector<f64>,
    noise_std: f64,
    rng: &mut R,
) -> Result<DVector<f64>> {
    if a.ncols() != x.len() {
        return Err(Error::InvalidDimension(format!(
            "matrix has {} columns but signal has length {}",
            a.ncols(),
            x.len()
        )));
    }
    let mut y = a * x;
    if noise_std > 0.0 {
        for yi in y.iter_mut() {
            *yi += noise_std * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Ok(y)
}

/// Squared spectral norm `||A||_2^2` by power iteration on the smaller Gram
/// matrix, to relative tolerance 1e-10 with a 10 000 iteration cap.
pub fn spectral_norm_sq(a: &DMatrix<f64>) -> f64 {
    assert!(a.nrows() > 0 && a.ncols() > 0, "matrix must be nonempty");
    let gram = if a.nrows() <= a.ncols() {
        a * a.transpose()
    } else {
        a.transpose() * a
    };
    let dim = gram.nrows();

    // Fixed pseudo-random start vector: almost surely not orthogonal to the
    // dominant eigenvector, and deterministic.
    let mut start_rng = rng_from(0x9013_57A7);
    let mut v = DVector::from_fn(dim, |_, _| start_rng.sample::<f64, _>(StandardNormal));
    let norm = v.norm();
    if norm == 0.0 {
        v.fill(1.0);
    } else {
        v /= norm;
    }

    let mut lambda = 0.0_f64;
    for _ in 0..10_000 {
        let w = &gram * &v;
        let new_lambda = v.dot(&w);
        let wn = w.norm();
        if wn <= f64::MIN_POSITIVE * dim as f64 {
            return 0.0;
        }
        v = w / wn;
        if (new_lambda - lambda).abs() <= 1e-10 * new_lambda.abs().max(f64::MIN_POSITIVE) {
            return new_lambda.max(0.0);
        }
        lambda = new_lambda;
    }
    lambda.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn generate_matches_contract() {
        let inst = generate_instance(100, 18, 10, 10, 0.0, 7).unwrap();
        assert_eq!(inst.true_support.len(), 10);
        let ind = inst.support_indicator();
        for x in &inst.x_star {
            for i in 0..inst.n {
                assert_eq!(x[i] != 0.0, ind[i], "support mismatch at {i}");
            }
        }
        assert_eq!(inst.x_star.len(), 10);
        assert_eq!(inst.sensing[0].shape(), (18, 100));
    }

    #[test]
    fn generate_rejects_bad_dims() {
        assert!(matches!(
            generate_instance(5, 3, 0, 2, 0.0, 1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(generate_instance(5, 5, 2, 2, 0.0, 1).is_err()); // m == n
        assert!(generate_instance(10, 4, 11, 2, 0.0, 1).is_err()); // k > n
        assert!(generate_instance(10, 4, 5, 2, 0.0, 1).is_ok()); // k > m allowed for sweeps
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance(40, 10, 4, 3, 0.0, 123).unwrap();
        let b = generate_instance(40, 10, 4, 3, 0.0, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn split_streams_fix_signals_across_matrices() {
        let a = generate_instance_split(40, 10, 4, 3, 0.0, 5, 100).unwrap();
        let b = generate_instance_split(40, 10, 4, 3, 0.0, 5, 200).unwrap();
        assert_eq!(a.true_support, b.true_support);
        assert_eq!(a.x_star, b.x_star);
        assert_ne!(a.sensing, b.sensing);
    }

    #[test]
    fn measure_examples() {
        let mut rng = crate::seeds::rng_from(0);
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, -1.0]);
        let zero = DVector::zeros(3);
        assert_eq!(measure(&a, &zero, 0.0, &mut rng).unwrap(), DVector::zeros(2));

        let eye = DMatrix::<f64>::identity(3, 3);
        let x = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        assert_eq!(measure(&eye, &x, 0.0, &mut rng).unwrap(), x);

        let bad = measure(&a, &DVector::zeros(4), 0.0, &mut rng);
        assert!(bad.is_err());
    }

    #[test]
    fn measure_matches_naive_matvec() {
        let inst = generate_instance(8, 4, 2, 1, 0.0, 42).unwrap();
        let a = &inst.sensing[0];
        let x = &inst.x_star[0];
        let mut rng = crate::seeds::rng_from(0);
        let y = measure(a, x, 0.0, &mut rng).unwrap();
        for r in 0..4 {
            let mut dot = 0.0;
            for c in 0..8 {
                dot += a[(r, c)] * x[c];
            }
            assert_relative_eq!(y[r], dot, epsilon = 1e-12);
        }
    }

    #[test]
    fn measure_is_linear() {
        let inst = generate_instance(12, 6, 3, 2, 0.0, 9).unwrap();
        let a = &inst.sensing[0];
        let mut rng = crate::seeds::rng_from(1);
        let x1 = DVector::from_fn(12, |i, _| (i as f64 * 0.7).sin());
        let x2 = DVector::from_fn(12, |i, _| (i as f64 * 1.3).cos());
        let lhs = measure(&a.clone(), &(2.0 * &x1 + 3.0 * &x2), 0.0, &mut rng).unwrap();
        let rhs = 2.0 * measure(a, &x1, 0.0, &mut rng).unwrap()
            + 3.0 * measure(a, &x2, 0.0, &mut rng).unwrap();
        assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn noise_is_zero_mean_ish_and_deterministic() {
        let a = generate_instance_split(20, 8, 3, 1, 0.5, 11, 12).unwrap();
        let b = generate_instance_split(20, 8, 3, 1, 0.5, 11, 12).unwrap();
        assert_eq!(a.measurements, b.measurements);
        let clean = generate_instance_split(20, 8, 3, 1, 0.0, 11, 12).unwrap();
        assert_ne!(a.measurements, clean.measurements);
    }

    #[test]
    fn columns_are_approximately_normalized() {
        let inst = generate_instance(60, 20, 5, 2, 0.0, 31).unwrap();
        for a in &inst.sensing {
            let mean_sq: f64 =
                (0..a.ncols()).map(|c| a.column(c).norm_squared()).sum::<f64>() / a.ncols() as f64;
            assert!((mean_sq - 1.0).abs() < 0.2, "mean column norm^2 = {mean_sq}");
        }
    }

    #[test]
    fn spectral_norm_examples() {
        let eye = DMatrix::<f64>::identity(3, 3);
        assert_relative_eq!(spectral_norm_sq(&eye), 1.0, epsilon = 1e-9);

        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0]));
        assert_relative_eq!(spectral_norm_sq(&diag), 9.0, epsilon = 1e-9);
    }

    #[test]
    fn spectral_norm_matches_dense_eigensolver() {
        let inst = generate_instance(8, 5, 2, 1, 0.0, 77).unwrap();
        let a = &inst.sensing[0];
        let gram = a.transpose() * a;
        let eig = gram.symmetric_eigen();
        let oracle = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        assert_relative_eq!(spectral_norm_sq(a), oracle, epsilon = 1e-8);
    }

    #[test]
    fn params_validation() {
        assert!(AlgoParams::default().validate().is_ok());
        let mut p = AlgoParams::default();
        p.tau = 0.0;
        assert!(p.validate().is_err());
        let mut p = AlgoParams::default();
        p.p = 0;
        assert!(p.validate().is_err());
    }
}
