//! Support and estimation quality metrics.

use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::result::RunResult;
use nalgebra::DVector;

/// Metric triple for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    /// Average support error: fraction of mismatched support positions over
    /// all nodes and components.
    pub ase: f64,
    /// Probability of exact support recovery: fraction of nodes with a
    /// perfectly recovered support.
    pub pesr: f64,
    /// Relative square error of the estimates.
    pub rse: f64,
}

/// Average support error over all nodes: mismatched positions divided by
/// `n * V`.
pub fn ase(true_support: &[bool], estimated: &[Vec<bool>]) -> f64 {
    let n = true_support.len();
    let mut mismatches = 0usize;
    for est in estimated {
        assert_eq!(est.len(), n, "support length mismatch");
        mismatches += est
            .iter()
            .zip(true_support)
            .filter(|(a, b)| a != b)
            .count();
    }
    mismatches as f64 / (n * estimated.len()) as f64
}

/// Fraction of nodes whose estimated support equals the true support
/// exactly.
pub fn pesr(true_support: &[bool], estimated: &[Vec<bool>]) -> f64 {
    let exact = estimated
        .iter()
        .filter(|est| {
            assert_eq!(est.len(), true_support.len(), "support length mismatch");
            est.as_slice() == true_support
        })
        .count();
    exact as f64 / estimated.len() as f64
}

/// Relative square error `sum_v ||x*_v - x^_v||^2 / sum_v ||x*_v||^2`.
pub fn rse(x_star: &[DVector<f64>], x_hat: &[DVector<f64>]) -> Result<f64> {
    assert_eq!(x_star.len(), x_hat.len(), "node count mismatch");
    let mut num = 0.0;
    let mut den = 0.0;
    for (truth, est) in x_star.iter().zip(x_hat) {
        assert_eq!(truth.len(), est.len(), "signal length mismatch");
        num += (truth - est).norm_squared();
        den += truth.norm_squared();
    }
    if den == 0.0 {
        return Err(Error::InvalidParam(
            "relative square error undefined for all-zero signals".into(),
        ));
    }
    Ok(num / den)
}

/// Computes all three metrics of a finished run against its instance.
pub fn report(instance: &ProblemInstance, result: &RunResult) -> Result<MetricReport> {
    let truth = instance.support_indicator();
    Ok(MetricReport {
        ase: ase(&truth, result.supports()),
        pesr: pesr(&truth, result.supports()),
        rse: rse(&instance.x_star, &result.estimates)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn truth(n: usize, on: &[usize]) -> Vec<bool> {
        let mut t = vec![false; n];
        for &i in on {
            t[i] = true;
        }
        t
    }

    #[test]
    fn ase_examples() {
        let t = truth(100, &(0..10).collect::<Vec<_>>());
        let exact = vec![t.clone(); 10];
        assert_eq!(ase(&t, &exact), 0.0);

        let mut one_flip = exact.clone();
        one_flip[3][50] = true;
        assert_eq!(ase(&t, &one_flip), 0.001);

        // empty estimates miss exactly the k support positions
        let empty = vec![vec![false; 100]; 10];
        assert_eq!(ase(&t, &empty), 0.1);
    }

    #[test]
    fn pesr_examples() {
        let t = truth(20, &[1, 2, 3]);
        let exact = vec![t.clone(); 10];
        assert_eq!(pesr(&t, &exact), 1.0);

        let mut seven = exact.clone();
        for est in seven.iter_mut().take(3) {
            est[10] = true;
        }
        assert_eq!(pesr(&t, &seven), 0.7);

        let none = vec![vec![false; 20]; 10];
        assert_eq!(pesr(&t, &none), 0.0);
    }

    #[test]
    fn rse_examples() {
        let xs: Vec<DVector<f64>> = (0..3)
            .map(|v| DVector::from_fn(5, |i, _| (v + i) as f64 + 1.0))
            .collect();
        assert_eq!(rse(&xs, &xs.clone()).unwrap(), 0.0);

        let zeros: Vec<DVector<f64>> = (0..3).map(|_| DVector::zeros(5)).collect();
        assert_eq!(rse(&xs, &zeros).unwrap(), 1.0);

        let doubled: Vec<DVector<f64>> = xs.iter().map(|x| 2.0 * x).collect();
        assert!((rse(&xs, &doubled).unwrap() - 1.0).abs() < 1e-15);

        assert!(rse(&zeros, &xs).is_err());
    }

    #[test]
    fn ase_zero_iff_pesr_one() {
        let t = truth(30, &[4, 9]);
        let mut ests = vec![t.clone(); 5];
        assert!(ase(&t, &ests) == 0.0 && pesr(&t, &ests) == 1.0);
        ests[2][0] = true;
        assert!(ase(&t, &ests) > 0.0 && pesr(&t, &ests) < 1.0);
    }

    proptest! {
        #[test]
        fn metrics_stay_in_range(bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 16), 1..6), tbits in prop::collection::vec(any::<bool>(), 16)) {
            let a = ase(&tbits, &bits);
            let p = pesr(&tbits, &bits);
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!((a == 0.0) == (p == 1.0));
        }

        #[test]
        fn metrics_invariant_under_component_permutation(
            shift in 0usize..16,
            bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 16), 3),
            tbits in prop::collection::vec(any::<bool>(), 16),
        ) {
            let rotate = |v: &Vec<bool>| -> Vec<bool> {
                (0..16).map(|i| v[(i + shift) % 16]).collect()
            };
            let rt = rotate(&tbits);
            let rb: Vec<Vec<bool>> = bits.iter().map(rotate).collect();
            prop_assert_eq!(ase(&tbits, &bits), ase(&rt, &rb));
            prop_assert_eq!(pesr(&tbits, &bits), pesr(&rt, &rb));
        }
    }
}
