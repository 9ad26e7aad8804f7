//! Response functions `w(p)`: the probability that a revising agent adopts
//! hawk when the opponent population's hawk share is `p`.

use serde::Serialize;

use crate::binomial;
use crate::error::{Error, Result};
use crate::game::{Action, Game};
use crate::poly::Bernstein;
use crate::sampling::{self, DynamicsKind, SampleDistribution, TieRule};
use crate::Scalar;

/// Points of the monotonicity check (`{0, 1e-3, …, 1}`).
const MONOTONE_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseKind {
    ActionSampling,
    PayoffSampling,
    /// `P(2X_k − Y_k < k)`, the payoff-sampling response as `g, l → 1`.
    LimitPayoff,
    /// Hand-built polynomial (e.g. a single binomial tail `P(X_k ≤ m)`).
    Custom,
}

impl From<DynamicsKind> for ResponseKind {
    fn from(kind: DynamicsKind) -> Self {
        match kind {
            DynamicsKind::ActionSampling => ResponseKind::ActionSampling,
            DynamicsKind::PayoffSampling => ResponseKind::PayoffSampling,
        }
    }
}

/// One analysis instance: game, sample sizes, dynamics and tie rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment<T> {
    pub game: Game<T>,
    pub theta: SampleDistribution<T>,
    pub kind: DynamicsKind,
    pub tie: TieRule,
}

impl<T: Scalar> Environment<T> {
    pub fn new(game: Game<T>, theta: SampleDistribution<T>, kind: DynamicsKind) -> Self {
        Self {
            game,
            theta,
            kind,
            tie: TieRule::default(),
        }
    }

    pub fn with_tie(mut self, tie: TieRule) -> Self {
        self.tie = tie;
        self
    }

    pub fn response(&self) -> ResponseFunction<T> {
        match self.kind {
            DynamicsKind::ActionSampling => build_action_response(&self.game, &self.theta, self.tie),
            DynamicsKind::PayoffSampling => build_payoff_response(&self.game, &self.theta, self.tie),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResponseFunction<T> {
    poly: Bernstein<T>,
    slope: Bernstein<T>,
    kind: ResponseKind,
    env: Option<Environment<T>>,
    monotone: bool,
}

impl<T: Scalar> ResponseFunction<T> {
    pub fn from_bernstein(poly: Bernstein<T>, kind: ResponseKind) -> Self {
        let slope = poly.derivative();
        let mut f = Self {
            poly,
            slope,
            kind,
            env: None,
            monotone: false,
        };
        f.monotone = f.check_decreasing();
        f
    }

    fn with_env(mut self, env: Environment<T>) -> Self {
        self.env = Some(env);
        self
    }

    /// The homogeneous action-sampling component `P(Bin(k, p) ≤ m)`.
    pub fn binomial_tail(k: u32, m: u32) -> Self {
        Self::from_bernstein(action_component(k, Some(m)), ResponseKind::Custom)
    }

    pub fn kind(&self) -> ResponseKind {
        self.kind
    }

    pub fn environment(&self) -> Option<&Environment<T>> {
        self.env.as_ref()
    }

    pub fn polynomial(&self) -> &Bernstein<T> {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Clamped to `[0, 1]`: rounding can otherwise put `w` one ulp outside
    /// (e.g. `1 − p^8` near `p = 0`).
    pub fn evaluate(&self, p: T) -> T {
        self.poly.eval(p).max(T::zero()).min(T::one())
    }

    pub fn derivative(&self, p: T) -> T {
        self.slope.eval(p)
    }

    /// `w(w(p)) − p`; its roots are the first coordinates of stationary states.
    pub fn second_iterate_residual(&self, p: T) -> T {
        self.evaluate(self.evaluate(p)) - p
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.monotone
    }

    /// True iff `w(p) = 1 − p` (coefficients within `tol`), the only
    /// polynomial response with `w ∘ w = id`.
    pub fn is_reflection(&self, tol: T) -> bool {
        self.poly.max_coeff_distance(&Bernstein::reflection()) <= tol
    }

    fn check_decreasing(&self) -> bool {
        let n = T::from_count(MONOTONE_GRID);
        (0..=MONOTONE_GRID).all(|i| {
            let d = self.derivative(T::from_count(i) / n);
            if i == 0 || i == MONOTONE_GRID {
                d <= T::zero()
            } else {
                d < T::zero()
            }
        })
    }

    /// `p` with `|w(p) − q| ≤ tol`, by bisection.
    pub fn inverse(&self, q: T, tol: T) -> Result<T> {
        if !(q >= T::zero() && q <= T::one()) {
            return Err(Error::TargetOutOfRange(q.to_f64_lossy()));
        }
        if !self.monotone {
            return Err(Error::NotMonotone);
        }
        let (mut lo, mut hi) = (T::zero(), T::one());
        let mut mid = (lo + hi) * T::lit(0.5);
        for _ in 0..200 {
            mid = (lo + hi) * T::lit(0.5);
            let r = self.evaluate(mid) - q;
            if r.abs() <= tol || hi - lo <= T::epsilon() {
                break;
            }
            if r > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }

    /// Monomial coefficients, lowest degree first.
    pub fn monomial_coefficients(&self) -> Vec<T> {
        self.poly.to_monomial()
    }

    /// Debug dump: JSON array of monomial coefficients, lowest degree first.
    pub fn to_json(&self) -> String {
        let coeffs: Vec<f64> = self
            .monomial_coefficients()
            .into_iter()
            .map(Scalar::to_f64_lossy)
            .collect();
        serde_json::to_string(&coeffs).expect("finite coefficients serialize")
    }
}

/// `Σ_{i ≤ m} C(k,i) p^i (1−p)^{k−i}` in degree-`k` Bernstein form (`None`: zero).
fn action_component<T: Scalar>(k: u32, cutoff: Option<u32>) -> Bernstein<T> {
    Bernstein::new(
        (0..=k)
            .map(|i| match cutoff {
                Some(m) if i <= m => T::one(),
                _ => T::zero(),
            })
            .collect(),
    )
}

/// Largest hawk count at which hawk is still the reply (`None` if never).
pub fn action_cutoff<T: Scalar>(game: &Game<T>, tie: TieRule, k: u32) -> Option<u32> {
    (0..=k)
        .take_while(|&x| sampling::action_best_reply(game, tie, x, k) == Action::Hawk)
        .last()
}

/// Degree-`2k` Bernstein form of `P(event(X, Y))` for iid `X, Y ~ Bin(k, p)`.
///
/// `p^x(1−p)^{k−x} p^y(1−p)^{k−y}` only depends on `s = x + y`, so the
/// Bernstein coefficient of index `s` is the hypergeometric mass
/// `Σ_{x+y=s, event} C(k,x)C(k,y) / C(2k,s)`.
fn paired_component<T: Scalar>(k: u32, event: impl Fn(u32, u32) -> bool) -> Bernstein<T> {
    let n = 2 * k as usize;
    let mut counts = vec![0u128; n + 1];
    for x in 0..=k {
        for y in 0..=k {
            if event(x, y) {
                counts[(x + y) as usize] +=
                    binomial::choose(k as usize, x as usize) * binomial::choose(k as usize, y as usize);
            }
        }
    }
    Bernstein::new(
        counts
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                T::from_u128(c).unwrap() / binomial::choose_as::<T>(n, s)
            })
            .collect(),
    )
}

fn mixture<T: Scalar>(
    theta: &SampleDistribution<T>,
    component: impl Fn(u32) -> Bernstein<T>,
) -> Bernstein<T> {
    let parts: Vec<(T, Bernstein<T>)> = theta.iter().map(|(k, q)| (q, component(k))).collect();
    Bernstein::combine(parts.iter().map(|(q, b)| (*q, b)))
}

/// `Σ_k θ(k) Pr(X_k/k < g/(1+g−l))`, ties resolved by `tie`.
pub fn build_action_response<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    tie: TieRule,
) -> ResponseFunction<T> {
    let poly = mixture(theta, |k| action_component(k, action_cutoff(game, tie, k)));
    ResponseFunction::from_bernstein(poly, ResponseKind::ActionSampling).with_env(Environment {
        game: *game,
        theta: theta.clone(),
        kind: DynamicsKind::ActionSampling,
        tie,
    })
}

/// `Σ_k θ(k) Pr((1+g)X_k < gk + lY_k)` with independent `X_k, Y_k`.
pub fn build_payoff_response<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    tie: TieRule,
) -> ResponseFunction<T> {
    let poly = mixture(theta, |k| {
        paired_component(k, |x, y| {
            sampling::payoff_best_reply(game, tie, x, y, k) == Action::Hawk
        })
    });
    ResponseFunction::from_bernstein(poly, ResponseKind::PayoffSampling).with_env(Environment {
        game: *game,
        theta: theta.clone(),
        kind: DynamicsKind::PayoffSampling,
        tie,
    })
}

/// `P(2X_k − Y_k < k)`.
///
/// # Panics
/// If `k` is zero or above [`sampling::MAX_SAMPLE_SIZE`].
pub fn build_limit_payoff_response<T: Scalar>(k: u32) -> ResponseFunction<T> {
    assert!((1..=sampling::MAX_SAMPLE_SIZE).contains(&k), "sample size {k} out of range");
    ResponseFunction::from_bernstein(limit_component(k), ResponseKind::LimitPayoff)
}

fn limit_component<T: Scalar>(k: u32) -> Bernstein<T> {
    paired_component(k, |x, y| 2 * x < k + y)
}

/// Mixture `Σ θ(k) P(2X_k − Y_k < k)`.
pub fn build_limit_payoff_mixture<T: Scalar>(theta: &SampleDistribution<T>) -> ResponseFunction<T> {
    ResponseFunction::from_bernstein(mixture(theta, limit_component), ResponseKind::LimitPayoff)
}
