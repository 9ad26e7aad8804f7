//! Mean dynamics `ṗᵢ = δ(w(pⱼ) − pᵢ)`: fixed-step RK4 integration, basin
//! estimation, the replicator baseline and phase-portrait data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equilibria::{self, Label, StationaryReport};
use crate::game::{Game, State};
use crate::response::ResponseFunction;
use crate::stats;
use crate::Scalar;

/// Sup-norm radius within which a trajectory end is attributed to a state.
pub const ATTRIBUTION_RADIUS: f64 = 1e-4;
/// Inset of the uniform initial-state square.
pub const START_INSET: f64 = 1e-6;

pub trait VectorField<T: Scalar> {
    fn velocity(&self, s: State<T>) -> (T, T);
}

/// The sampling dynamics driven by a response function.
pub struct SamplingField<'a, T> {
    pub response: &'a ResponseFunction<T>,
    pub delta: T,
}

impl<T: Scalar> VectorField<T> for SamplingField<'_, T> {
    fn velocity(&self, s: State<T>) -> (T, T) {
        let w = self.response;
        (
            self.delta * (w.evaluate(s.p2) - s.p1),
            self.delta * (w.evaluate(s.p1) - s.p2),
        )
    }
}

/// Two-population replicator dynamics of a game.
pub struct ReplicatorField<T> {
    pub game: Game<T>,
}

impl<T: Scalar> VectorField<T> for ReplicatorField<T> {
    fn velocity(&self, s: State<T>) -> (T, T) {
        replicator_step(&self.game, s)
    }
}

/// `ṗᵢ = pᵢ (u(h, pⱼ) − u(pᵢ, pⱼ))`.
pub fn replicator_step<T: Scalar>(game: &Game<T>, s: State<T>) -> (T, T) {
    let rate = |own: T, opp: T| {
        let hawk = game.mixed_payoff(T::one(), opp);
        own * (hawk - game.mixed_payoff(own, opp))
    };
    (rate(s.p1, s.p2), rate(s.p2, s.p1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    /// Revision rate `δ > 0`.
    pub delta: T,
    pub t_max: T,
    /// Convergence threshold on `‖ṗ‖∞`.
    pub tol: T,
    /// Keep every n-th step in the recorded path.
    pub record_every: usize,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            delta: T::one(),
            t_max: T::lit(1e4),
            tol: T::lit(1e-9),
            record_every: 1,
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    /// `0.01 / δ`.
    pub fn step(&self) -> T {
        T::lit(0.01) / self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryResult<T> {
    /// `(t, state)` samples, starting with the initial state and ending with
    /// the final one.
    pub path: Vec<(T, State<T>)>,
    /// Final state if the velocity dropped below tolerance.
    pub limit: Option<State<T>>,
    pub diverged: bool,
    /// Index into the stationary-state list, when attributed.
    pub limit_state_index: Option<usize>,
    pub steps: usize,
    /// Largest correction applied by clamping to the unit square.
    pub max_clamp: T,
}

impl<T: Scalar> TrajectoryResult<T> {
    pub fn final_state(&self) -> State<T> {
        self.path.last().expect("path holds the start").1
    }

    pub fn final_time(&self) -> T {
        self.path.last().expect("path holds the start").0
    }

    /// Linear interpolation of the recorded path at time `t` (clamped to the
    /// recorded range).
    pub fn state_at(&self, t: T) -> State<T> {
        let idx = self.path.partition_point(|(ti, _)| *ti <= t);
        if idx == 0 {
            return self.path[0].1;
        }
        if idx >= self.path.len() {
            return self.final_state();
        }
        let (t0, s0) = self.path[idx - 1];
        let (t1, s1) = self.path[idx];
        let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { T::zero() };
        State::raw(s0.p1 + w * (s1.p1 - s0.p1), s0.p2 + w * (s1.p2 - s0.p2))
    }

    /// CSV with columns `t,p1,p2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,p1,p2\n");
        for (t, s) in &self.path {
            out.push_str(&format!("{t},{},{}\n", s.p1, s.p2));
        }
        out
    }
}

fn rk4_step<T: Scalar, F: VectorField<T>>(field: &F, s: State<T>, h: T) -> State<T> {
    let half = h * T::lit(0.5);
    let at = |base: State<T>, k: (T, T), c: T| State::raw(base.p1 + c * k.0, base.p2 + c * k.1);
    let k1 = field.velocity(s);
    let k2 = field.velocity(at(s, k1, half));
    let k3 = field.velocity(at(s, k2, half));
    let k4 = field.velocity(at(s, k3, h));
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    State::raw(
        s.p1 + sixth * (k1.0 + two * k2.0 + two * k3.0 + k4.0),
        s.p2 + sixth * (k1.1 + two * k2.1 + two * k3.1 + k4.1),
    )
}

/// Integrates any planar field on the unit square with step `cfg.step()`.
pub fn integrate_field<T: Scalar, F: VectorField<T>>(
    field: &F,
    start: State<T>,
    cfg: &IntegratorConfig<T>,
) -> TrajectoryResult<T> {
    let h = cfg.step();
    let max_steps = (cfg.t_max / h).ceil().to_usize().unwrap_or(usize::MAX);
    let record_every = cfg.record_every.max(1);
    let mut s = start;
    let mut path = vec![(T::zero(), s)];
    let mut max_clamp = T::zero();
    let mut steps = 0usize;
    let speed = |s: State<T>| {
        let v = field.velocity(s);
        v.0.abs().max(v.1.abs())
    };
    let mut converged = speed(s) < cfg.tol;
    while !converged && steps < max_steps {
        let next = rk4_step(field, s, h);
        let clamped = next.clamped();
        max_clamp = max_clamp.max(clamped.dist_inf(&next));
        s = clamped;
        steps += 1;
        converged = speed(s) < cfg.tol;
        if steps.is_multiple_of(record_every) || converged || steps == max_steps {
            path.push((T::from_count(steps) * h, s));
        }
    }
    TrajectoryResult {
        path,
        limit: converged.then_some(s),
        diverged: !converged,
        limit_state_index: None,
        steps,
        max_clamp,
    }
}

pub fn integrate<T: Scalar>(
    f: &ResponseFunction<T>,
    start: State<T>,
    cfg: &IntegratorConfig<T>,
) -> TrajectoryResult<T> {
    let field = SamplingField {
        response: f,
        delta: cfg.delta,
    };
    integrate_field(&field, start, cfg)
}

/// Matches the limit to a known stationary state within `radius`; limits
/// near Marginal or Continuum states stay unattributed.
pub fn attribute<T: Scalar>(result: &mut TrajectoryResult<T>, report: &StationaryReport<T>, radius: T) {
    result.limit_state_index = result.limit.and_then(|lim| {
        report.nearest(&lim, radius).filter(|&i| {
            matches!(
                report.states[i].label,
                Label::AsymptoticallyStable | Label::Unstable
            )
        })
    });
}

pub fn integrate_attributed<T: Scalar>(
    f: &ResponseFunction<T>,
    start: State<T>,
    cfg: &IntegratorConfig<T>,
    report: &StationaryReport<T>,
) -> TrajectoryResult<T> {
    let mut r = integrate(f, start, cfg);
    attribute(&mut r, report, T::lit(ATTRIBUTION_RADIUS));
    r
}

/// Deterministic uniform start number `index` of the stream `seed`.
pub fn uniform_start<T: Scalar>(seed: u64, index: u64) -> State<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let span = 1.0 - 2.0 * START_INSET;
    let p1 = START_INSET + span * rng.gen::<f64>();
    let p2 = START_INSET + span * rng.gen::<f64>();
    State::raw(T::lit(p1), T::lit(p2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinShare<T> {
    pub state: State<T>,
    pub label: Label,
    pub count: usize,
    pub fraction: f64,
    /// Wilson 95% half-width.
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinEstimate<T> {
    pub shares: Vec<BasinShare<T>>,
    pub unattributed: usize,
    pub unattributed_fraction: f64,
    pub samples: usize,
    pub seed: u64,
}

impl<T: Scalar> BasinEstimate<T> {
    pub fn fraction_where(&self, pred: impl Fn(&BasinShare<T>) -> bool) -> f64 {
        self.shares.iter().filter(|s| pred(s)).map(|s| s.fraction).sum()
    }
}

/// Monte Carlo basin estimate from `n` uniform interior starts. Start `i`
/// is drawn from stream `i` of `seed`, so results do not depend on the
/// number of worker threads.
pub fn estimate_basins<T: Scalar>(
    f: &ResponseFunction<T>,
    n: usize,
    seed: u64,
    cfg: &IntegratorConfig<T>,
) -> BasinEstimate<T> {
    let report = equilibria::find_stationary_states(f, T::lit(equilibria::ROOT_TOL));
    estimate_basins_with(f, &report, n, seed, cfg)
}

pub fn estimate_basins_with<T: Scalar>(
    f: &ResponseFunction<T>,
    report: &StationaryReport<T>,
    n: usize,
    seed: u64,
    cfg: &IntegratorConfig<T>,
) -> BasinEstimate<T> {
    let cfg = IntegratorConfig {
        record_every: usize::MAX,
        ..*cfg
    };
    let outcomes: Vec<Option<usize>> = (0..n as u64)
        .into_par_iter()
        .map(|i| integrate_attributed(f, uniform_start(seed, i), &cfg, report).limit_state_index)
        .collect();
    let mut counts = vec![0usize; report.states.len()];
    let mut unattributed = 0;
    for o in outcomes {
        match o {
            Some(i) => counts[i] += 1,
            None => unattributed += 1,
        }
    }
    let frac = |c: usize| if n == 0 { 0.0 } else { c as f64 / n as f64 };
    BasinEstimate {
        shares: report
            .states
            .iter()
            .zip(counts)
            .map(|(s, count)| BasinShare {
                state: s.location,
                label: s.label,
                count,
                fraction: frac(count),
                half_width: stats::wilson(count, n, stats::Z95).1,
            })
            .collect(),
        unattributed,
        unattributed_fraction: frac(unattributed),
        samples: n,
        seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorSample<T> {
    pub p1: T,
    pub p2: T,
    pub v1: T,
    pub v2: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePortrait<T> {
    pub resolution: usize,
    pub vectors: Vec<VectorSample<T>>,
    /// `p₂ = w(p₁)`, where `ṗ₂ = 0`.
    pub w_curve: Vec<(T, T)>,
    /// `p₂ = w⁻¹(p₁)`, equivalently `p₁ = w(p₂)`: where `ṗ₁ = 0`.
    pub inverse_curve: Vec<(T, T)>,
}

/// Velocity grid (`resolution × resolution`, edges included, `δ = 1`) and the
/// two nullclines sampled at `max(10·resolution, 200) + 1` points each.
pub fn nullcline_field<T: Scalar>(f: &ResponseFunction<T>, resolution: usize) -> PhasePortrait<T> {
    let resolution = resolution.max(2);
    let field = SamplingField {
        response: f,
        delta: T::one(),
    };
    let r1 = T::from_count(resolution - 1);
    let mut vectors = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let s = State::raw(T::from_count(i) / r1, T::from_count(j) / r1);
            let (v1, v2) = field.velocity(s);
            vectors.push(VectorSample {
                p1: s.p1,
                p2: s.p2,
                v1,
                v2,
            });
        }
    }
    let n = (10 * resolution).max(200);
    let nf = T::from_count(n);
    let w_curve: Vec<(T, T)> = (0..=n)
        .map(|i| {
            let p = T::from_count(i) / nf;
            (p, f.evaluate(p))
        })
        .collect();
    let inverse_curve = (0..=n)
        .rev()
        .map(|i| {
            let t = T::from_count(i) / nf;
            (f.evaluate(t), t)
        })
        .collect();
    PhasePortrait {
        resolution,
        vectors,
        w_curve,
        inverse_curve,
    }
}
