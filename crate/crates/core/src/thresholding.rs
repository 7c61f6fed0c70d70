//! Scalar penalty and shrinkage primitives.
//!
//! The penalty is the minimax concave penalty (MCP): quadratic near the
//! origin, constant at `beta^2 / 2` beyond `beta`. Its derivative yields the
//! reweighting rule used by the distributed solvers, and the shrinkage
//! operators are the exact piecewise definitions (no smoothing).

/// MCP penalty value at `z >= 0`.
///
/// `beta*z - z^2/2` for `z < beta`, saturating at `beta^2/2`. Continuous,
/// nondecreasing and concave on `[0, inf)`.
pub fn mcp_g(z: f64, beta: f64) -> f64 {
    assert!(z >= 0.0, "mcp_g takes a nonnegative argument, got {z}");
    assert!(beta > 0.0, "mcp_g requires beta > 0, got {beta}");
    if z < beta {
        beta * z - 0.5 * z * z
    } else {
        0.5 * beta * beta
    }
}

/// Reweighting rule `[beta - alpha*|x| - mean_indicator]_+`.
///
/// Equals `g'(alpha*|x| + mean_indicator)` for the MCP `g`, clamped at zero.
pub fn mcp_weight(x_abs: f64, mean_indicator: f64, alpha: f64, beta: f64) -> f64 {
    assert!(x_abs >= 0.0, "mcp_weight takes |x|, got {x_abs}");
    assert!(
        (0.0..=1.0).contains(&mean_indicator),
        "mean indicator must lie in [0, 1], got {mean_indicator}"
    );
    assert!(alpha > 0.0 && beta > 0.0);
    (beta - alpha * x_abs - mean_indicator).max(0.0)
}

/// Soft thresholding: zero inside the dead zone `|x| <= w`, otherwise shrink
/// by `w` toward zero.
pub fn soft(x: f64, w: f64) -> f64 {
    debug_assert!(w >= 0.0, "soft threshold must be nonnegative, got {w}");
    if x.abs() <= w {
        0.0
    } else {
        x - w * x.signum()
    }
}

/// Mixed soft/hard thresholding: like [`soft`] but additionally maps to zero
/// when `(|x| - w)^2 <= a`. Ties collapse to zero. `a = 0` degenerates to
/// plain soft thresholding.
pub fn soft_hard(x: f64, w: f64, a: f64) -> f64 {
    debug_assert!(w >= 0.0 && a >= 0.0);
    let ax = x.abs();
    if ax <= w || (ax - w) * (ax - w) <= a {
        0.0
    } else {
        x - w * x.signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn mcp_g_branches() {
        assert_eq!(mcp_g(0.0, 1.1), 0.0);
        // saturated branch: beta^2 / 2
        assert!((mcp_g(2.0, 1.1) - 0.605).abs() < 1e-15);
        // quadratic branch: 1.1*0.55 - 0.55^2/2
        assert!((mcp_g(0.55, 1.1) - 0.45375).abs() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn mcp_g_rejects_negative() {
        mcp_g(-0.1, 1.1);
    }

    #[test]
    fn mcp_weight_examples() {
        assert_eq!(mcp_weight(0.0, 0.0, 5e-4, 1.1), 1.1);
        assert!((mcp_weight(0.0, 1.0, 5e-4, 1.1) - 0.1).abs() < 1e-12);
        assert_eq!(mcp_weight(4000.0, 1.0, 5e-4, 1.1), 0.0);
    }

    #[test]
    fn soft_examples() {
        assert_eq!(soft(5.0, 2.0), 3.0);
        assert_eq!(soft(-5.0, 2.0), -3.0);
        assert_eq!(soft(1.0, 2.0), 0.0);
    }

    #[test]
    fn soft_hard_examples() {
        // (2-1)^2 = 1 > 0.5 -> shrink
        assert_eq!(soft_hard(2.0, 1.0, 0.5), 1.0);
        // (1.5-1)^2 = 0.25 <= 0.5 -> zero
        assert_eq!(soft_hard(1.5, 1.0, 0.5), 0.0);
    }

    #[test]
    fn mcp_g_is_concave() {
        let mut rng = crate::seeds::rng_from(0x6C0);
        for _ in 0..100 {
            let z1: f64 = rng.random_range(0.0..3.0);
            let z2: f64 = rng.random_range(z1..4.0);
            let mid = mcp_g(0.5 * (z1 + z2), 1.1);
            let chord = 0.5 * (mcp_g(z1, 1.1) + mcp_g(z2, 1.1));
            assert!(mid >= chord - 1e-12, "concavity violated at ({z1}, {z2})");
        }
    }

    /// Brute-force grid argmin of the scalar surrogate
    /// `(x' - z)^2 + 2 w |x'| + a * 1(x' != 0)`, whose minimizer is
    /// `soft_hard(z, w, a)` (the surrogate case analysis up to a positive
    /// scale factor).
    fn grid_argmin(z: f64, w: f64, a: f64) -> f64 {
        let step = 1e-4;
        let mut best_x = 0.0;
        let mut best_val = z * z; // value at x' = 0
        let mut x = -10.0;
        while x <= 10.0 {
            if x != 0.0 {
                let val = (x - z) * (x - z) + 2.0 * w * x.abs() + a;
                if val < best_val {
                    best_val = val;
                    best_x = x;
                }
            }
            x += step;
        }
        best_x
    }

    #[test]
    fn soft_hard_matches_grid_argmin_sample() {
        let mut rng = crate::seeds::rng_from(0x50F7);
        for _ in 0..50 {
            let z: f64 = rng.random_range(-8.0..8.0);
            let w: f64 = rng.random_range(0.0..3.0);
            let a: f64 = rng.random_range(0.0..2.0);
            let analytic = soft_hard(z, w, a);
            let grid = grid_argmin(z, w, a);
            assert!(
                (analytic - grid).abs() <= 1e-4 + 1e-12,
                "mismatch at z={z} w={w} a={a}: analytic={analytic} grid={grid}"
            );
        }
    }

    proptest! {
        #[test]
        fn soft_shrinks_and_keeps_sign(x in -100.0f64..100.0, w in 0.0f64..50.0) {
            let s = soft(x, w);
            prop_assert!(s.abs() <= x.abs());
            prop_assert!(s * x >= 0.0);
        }

        #[test]
        fn soft_hard_with_zero_a_is_soft(x in -100.0f64..100.0, w in 0.0f64..50.0) {
            prop_assert_eq!(soft_hard(x, w, 0.0), soft(x, w));
        }

        #[test]
        fn mcp_weight_is_nonincreasing(
            x1 in 0.0f64..1000.0, dx in 0.0f64..1000.0,
            m1 in 0.0f64..1.0, dm in 0.0f64..1.0,
        ) {
            let m2 = (m1 + dm).min(1.0);
            prop_assert!(mcp_weight(x1 + dx, m1, 5e-4, 1.1) <= mcp_weight(x1, m1, 5e-4, 1.1));
            prop_assert!(mcp_weight(x1, m2, 5e-4, 1.1) <= mcp_weight(x1, m1, 5e-4, 1.1));
        }
    }
}
