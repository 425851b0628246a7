use super::grid::FracOrder;

/// Grünwald-Letnikov weights `w_k` of `(1 − z)^α`:
/// `w_0 = 1`, `w_k = w_{k−1} (k − 1 − α) / k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GLWeights {
    alpha: FracOrder,
    w: Vec<f64>,
}

impl GLWeights {
    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }
}

/// `w_0..=w_n` for order α.
pub fn gl_weights(alpha: FracOrder, n: usize) -> GLWeights {
    GLWeights { alpha, w: binomial_weights(alpha.value(), n) }
}

/// Coefficients of `(1 − z)^s` up to `z^n` for any real `s`. Used directly
/// where the exponent is not a valid [`FracOrder`] (e.g. `s = 1` in
/// semigroup checks).
pub fn binomial_weights(s: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    w.push(1.0);
    for k in 1..=n {
        let kf = k as f64;
        w.push(w[k - 1] * (kf - 1.0 - s) / kf);
    }
    w
}

/// Cauchy product of two sequences, truncated to `len` terms.
pub fn convolve_truncated(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    (0..len)
        .map(|m| {
            (0..=m)
                .filter(|&k| k < a.len() && m - k < b.len())
                .map(|k| a[k] * b[m - k])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_order_by_hand() {
        let w = gl_weights(FracOrder::HALF, 4);
        assert_eq!(w.w(), &[1.0, -0.5, -0.125, -0.0625, -0.0390625]);
    }

    #[test]
    fn half_kernels_compose_to_backward_difference() {
        let n = 64;
        let w = gl_weights(FracOrder::HALF, n);
        let c = convolve_truncated(w.w(), w.w(), n + 1);
        assert!((c[0] - 1.0).abs() < 1e-15);
        assert!((c[1] + 1.0).abs() < 1e-15);
        for v in &c[2..] {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn sign_and_monotonicity() {
        let w = gl_weights(FracOrder::new(0.3).unwrap(), 200);
        let w = w.w();
        for k in 1..w.len() {
            assert!(w[k] < 0.0);
            if k > 1 {
                assert!(w[k] > w[k - 1]);
            }
        }
    }

    proptest! {
        #[test]
        fn semigroup(a in 0.01f64..0.99, frac in 0.0f64..1.0, n in 1usize..=512) {
            // β ∈ (0, 1 − α]
            let b = (1.0 - a) * frac.max(1e-3);
            let wa = binomial_weights(a, n);
            let wb = binomial_weights(b, n);
            let wab = binomial_weights(a + b, n);
            let c = convolve_truncated(&wa, &wb, n + 1);
            for k in 0..=n {
                prop_assert!((c[k] - wab[k]).abs() <= 1e-12, "k={} {} vs {}", k, c[k], wab[k]);
            }
        }

        #[test]
        fn recurrence_is_exact(a in 0.01f64..0.99, n in 1usize..300) {
            let w = gl_weights(FracOrder::new(a).unwrap(), n);
            let w = w.w();
            prop_assert_eq!(w[0], 1.0);
            for k in 1..=n {
                prop_assert_eq!(w[k], w[k - 1] * ((k as f64) - 1.0 - a) / k as f64);
            }
        }
    }
}
