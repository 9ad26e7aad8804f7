//! Exact binomial coefficients from a cached Pascal triangle.

use std::sync::OnceLock;

use crate::Scalar;

/// Largest row of the cached triangle. Payoff-sampling responses for sample
/// size `k` have degree `2k`, so this covers `k` up to 64.
pub const MAX_ROW: usize = 128;

fn triangle() -> &'static Vec<Vec<u128>> {
    static TRIANGLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TRIANGLE.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(MAX_ROW + 1);
        rows.push(vec![1]);
        for n in 1..=MAX_ROW {
            let prev = &rows[n - 1];
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        rows
    })
}

/// `C(n, k)` exactly; zero when `k > n`.
///
/// # Panics
/// If `n > MAX_ROW`.
pub fn choose(n: usize, k: usize) -> u128 {
    assert!(n <= MAX_ROW, "binomial row {n} exceeds cache ({MAX_ROW})");
    if k > n {
        0
    } else {
        triangle()[n][k]
    }
}

pub fn choose_as<T: Scalar>(n: usize, k: usize) -> T {
    T::from_u128(choose(n, k)).expect("binomial coefficient representable")
}

/// `Pr(Bin(n, p) = i)`.
pub fn pmf<T: Scalar>(n: usize, i: usize, p: T) -> T {
    if i > n {
        return T::zero();
    }
    choose_as::<T>(n, i) * p.powi(i as i32) * (T::one() - p).powi((n - i) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        assert_eq!(choose(0, 0), 1);
        assert_eq!(choose(5, 2), 10);
        assert_eq!(choose(10, 5), 252);
        assert_eq!(choose(3, 4), 0);
    }

    #[test]
    fn large_row_is_exact() {
        let sum: u128 = (0..=127).map(|k| choose(127, k)).sum();
        assert_eq!(sum, 1u128 << 127);
        assert_eq!(choose(128, 64), choose(127, 63) + choose(127, 64));
        assert_eq!(choose(128, 1), 128);
        assert_eq!(choose(128, 127), 128);
        assert_eq!(choose(40, 20), 137_846_528_820);
    }

    #[test]
    fn pmf_sums_to_one() {
        let total: f64 = (0..=12).map(|i| pmf(12, i, 0.3)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
