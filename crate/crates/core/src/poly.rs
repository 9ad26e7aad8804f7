//! Polynomials on `[0, 1]` in the Bernstein basis.
//!
//! Every response function is a mixture of binomial tail probabilities, so
//! its Bernstein coefficients are probabilities in `[0, 1]`. Evaluation sums
//! nonnegative terms and stays accurate at degree 128, where the monomial
//! expansion of the same polynomial has coefficients of size 10^30 and more.

use crate::binomial;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Bernstein<T> {
    /// `b_i` in `Σ b_i C(n,i) p^i (1−p)^{n−i}`.
    coeffs: Vec<T>,
    /// `b_i C(n,i)`, cached for evaluation.
    scaled: Vec<T>,
}

impl<T: Scalar> Bernstein<T> {
    /// # Panics
    /// If `coeffs` is empty or the degree exceeds the binomial cache.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "Bernstein polynomial needs a coefficient");
        let n = coeffs.len() - 1;
        let scaled = coeffs
            .iter()
            .enumerate()
            .map(|(i, &b)| b * binomial::choose_as::<T>(n, i))
            .collect();
        Self { coeffs, scaled }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `1 − p`.
    pub fn reflection() -> Self {
        Self::new(vec![T::one(), T::zero()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, p: T) -> T {
        let n = self.degree();
        if n == 0 {
            return self.coeffs[0];
        }
        let one = T::one();
        let half = T::lit(0.5);
        if p <= half {
            // (1−p)^n Σ s_i t^i with t = p/(1−p) ≤ 1
            let q = one - p;
            let t = p / q;
            let mut acc = self.scaled[n];
            for s in self.scaled[..n].iter().rev() {
                acc = acc * t + *s;
            }
            acc * q.powi(n as i32)
        } else {
            // p^n Σ s_i u^{n−i} with u = (1−p)/p < 1
            let u = (one - p) / p;
            let mut acc = self.scaled[0];
            for s in &self.scaled[1..] {
                acc = acc * u + *s;
            }
            acc * p.powi(n as i32)
        }
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::constant(T::zero());
        }
        let nf = T::from_count(n);
        Self::new(
            self.coeffs
                .windows(2)
                .map(|w| nf * (w[1] - w[0]))
                .collect(),
        )
    }

    /// Same polynomial expressed at a higher degree.
    pub fn elevate(&self, degree: usize) -> Self {
        assert!(degree >= self.degree(), "cannot lower the degree by elevation");
        let mut b = self.coeffs.clone();
        while b.len() - 1 < degree {
            let n1 = T::from_count(b.len()); // n + 1
            let mut next = Vec::with_capacity(b.len() + 1);
            next.push(b[0]);
            for i in 1..b.len() {
                let w = T::from_count(i) / n1;
                next.push(w * b[i - 1] + (T::one() - w) * b[i]);
            }
            next.push(b[b.len() - 1]);
            b = next;
        }
        Self::new(b)
    }

    /// `Σ weight_j · poly_j`, at the largest degree among the terms.
    pub fn combine<'a>(terms: impl IntoIterator<Item = (T, &'a Bernstein<T>)>) -> Self
    where
        T: 'a,
    {
        let terms: Vec<(T, &Bernstein<T>)> = terms.into_iter().collect();
        let degree = terms.iter().map(|(_, b)| b.degree()).max().unwrap_or(0);
        let mut out = vec![T::zero(); degree + 1];
        for (w, b) in terms {
            let e = b.elevate(degree);
            for (o, c) in out.iter_mut().zip(e.coeffs.iter()) {
                *o = *o + w * *c;
            }
        }
        Self::new(out)
    }

    /// Monomial coefficients, lowest degree first.
    ///
    /// Only for display and debugging; catastrophic cancellation makes these
    /// useless for evaluation at high degree.
    pub fn to_monomial(&self) -> Vec<T> {
        let n = self.degree();
        let mut a = vec![T::zero(); n + 1];
        for (i, &b) in self.coeffs.iter().enumerate() {
            if b == T::zero() {
                continue;
            }
            let lead = b * binomial::choose_as::<T>(n, i);
            for (d, aj) in a[i..].iter_mut().enumerate() {
                let c = lead * binomial::choose_as::<T>(n - i, d);
                *aj = if d % 2 == 0 { *aj + c } else { *aj - c };
            }
        }
        a
    }

    /// Largest coefficient-wise deviation from `other` after elevating both.
    pub fn max_coeff_distance(&self, other: &Self) -> T {
        let d = self.degree().max(other.degree());
        let (a, b) = (self.elevate(d), other.elevate(d));
        a.coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| (*x - *y).abs())
            .fold(T::zero(), T::max)
    }
}
