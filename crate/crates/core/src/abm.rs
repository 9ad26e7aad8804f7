//! Finite-population counterpart of the mean dynamics.
//!
//! Two populations of `N` agents each. In every event a uniformly chosen
//! agent (out of all `2N`) revises: the agent draws a sample size `k ~ θ`, samples
//! opponents from the *other* population and adopts the reply prescribed by
//! the dynamics. `2N` events make one block, i.e. one expected revision per
//! agent, which corresponds to one unit of time at `δ = 1`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::StationaryReport;
use crate::error::{Error, Result};
use crate::flow::TrajectoryResult;
use crate::game::{Action, State};
use crate::response::Environment;
use crate::sampling::{self, DynamicsKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    actions: Vec<Action>,
    hawks: usize,
}

impl Population {
    /// `hawks` hawks followed by doves.
    pub fn new(n: usize, hawks: usize) -> Self {
        assert!(hawks <= n);
        let actions = (0..n)
            .map(|i| if i < hawks { Action::Hawk } else { Action::Dove })
            .collect();
        Self { actions, hawks }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn hawk_count(&self) -> usize {
        self.hawks
    }

    pub fn share(&self) -> f64 {
        self.hawks as f64 / self.actions.len() as f64
    }

    pub fn action(&self, i: usize) -> Action {
        self.actions[i]
    }

    pub fn set(&mut self, i: usize, a: Action) {
        match (self.actions[i], a) {
            (Action::Dove, Action::Hawk) => self.hawks += 1,
            (Action::Hawk, Action::Dove) => self.hawks -= 1,
            _ => {}
        }
        self.actions[i] = a;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Agents per population.
    pub n: usize,
    /// Number of recorded blocks (expected revisions per agent).
    pub horizon: usize,
    pub seed: u64,
    pub env: Environment<f64>,
    pub start: (f64, f64),
    /// Sample distinct opponents instead of drawing with replacement.
    pub without_replacement: bool,
}

impl SimConfig {
    pub fn new(env: Environment<f64>, n: usize, horizon: usize, seed: u64, start: (f64, f64)) -> Self {
        Self {
            n,
            horizon,
            seed,
            env,
            start,
            without_replacement: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("population size {} < 2", self.n)));
        }
        State::new(self.start.0, self.start.1)?;
        if self.without_replacement && self.env.theta.max_support() as usize > self.n {
            return Err(Error::InvalidConfig(format!(
                "sample size {} exceeds population {} without replacement",
                self.env.theta.max_support(),
                self.n
            )));
        }
        Ok(())
    }
}

/// One running replicate.
pub struct Abm {
    config: SimConfig,
    pops: [Population; 2],
    sizes: Vec<u32>,
    size_dist: WeightedIndex<f64>,
    rng: ChaCha8Rng,
    events: u64,
}

impl Abm {
    pub fn new(config: SimConfig) -> Result<Self> {
        Self::replicate(config, 0)
    }

    /// Replicate `id` uses stream `id` of the config seed.
    pub fn replicate(config: SimConfig, id: u64) -> Result<Self> {
        config.validate()?;
        let n = config.n;
        let hawks = |p: f64| ((p * n as f64).round() as usize).min(n);
        let pops = [
            Population::new(n, hawks(config.start.0)),
            Population::new(n, hawks(config.start.1)),
        ];
        let sizes: Vec<u32> = config.env.theta.iter().map(|(k, _)| k).collect();
        let size_dist = WeightedIndex::new(config.env.theta.iter().map(|(_, q)| q))
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(id);
        Ok(Self {
            config,
            pops,
            sizes,
            size_dist,
            rng,
            events: 0,
        })
    }

    pub fn population(&self, i: usize) -> &Population {
        &self.pops[i]
    }

    pub fn shares(&self) -> (f64, f64) {
        (self.pops[0].share(), self.pops[1].share())
    }

    pub fn hawk_counts(&self) -> (usize, usize) {
        (self.pops[0].hawk_count(), self.pops[1].hawk_count())
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    /// Indices of `k` opponents drawn from population `from`.
    fn draw(&mut self, from: usize, k: u32) -> Vec<usize> {
        let n = self.pops[from].len();
        if self.config.without_replacement {
            index::sample(&mut self.rng, n, k as usize).into_vec()
        } else {
            (0..k).map(|_| self.rng.gen_range(0..n)).collect()
        }
    }

    fn count_hawks(&self, from: usize, idx: &[usize]) -> u32 {
        idx.iter()
            .filter(|&&j| self.pops[from].action(j) == Action::Hawk)
            .count() as u32
    }

    /// One revision event.
    pub fn step(&mut self) {
        let n = self.config.n;
        let who = self.rng.gen_range(0..2 * n);
        let (own, agent) = (who / n, who % n);
        let opp = 1 - own;
        let k = self.sizes[self.size_dist.sample(&mut self.rng)];
        let env = &self.config.env;
        let (game, tie) = (env.game, env.tie);
        let action = match env.kind {
            DynamicsKind::ActionSampling => {
                let sample = self.draw(opp, k);
                sampling::action_best_reply(&game, tie, self.count_hawks(opp, &sample), k)
            }
            DynamicsKind::PayoffSampling => {
                let h_trial = self.draw(opp, k);
                let d_trial = self.draw(opp, k);
                let x = self.count_hawks(opp, &h_trial);
                let y = self.count_hawks(opp, &d_trial);
                sampling::payoff_best_reply(&game, tie, x, y, k)
            }
        };
        self.pops[own].set(agent, action);
        self.events += 1;
    }

    /// `2N` events.
    pub fn run_block(&mut self) {
        for _ in 0..2 * self.config.n {
            self.step();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbmSeries {
    pub replicate: u64,
    /// `(block, p1_hat, p2_hat)`, block 0 being the initial state.
    pub points: Vec<(usize, f64, f64)>,
}

impl AbmSeries {
    pub fn terminal(&self) -> State<f64> {
        let (_, p1, p2) = *self.points.last().expect("series holds the start");
        State { p1, p2 }
    }
}

/// Replicate `id` (stream `id` of the config seed).
pub fn run_replicate(config: &SimConfig, id: u64) -> Result<AbmSeries> {
    let mut abm = Abm::replicate(config.clone(), id)?;
    let mut points = Vec::with_capacity(config.horizon + 1);
    let (p1, p2) = abm.shares();
    points.push((0, p1, p2));
    for b in 1..=config.horizon {
        abm.run_block();
        let (p1, p2) = abm.shares();
        points.push((b, p1, p2));
    }
    Ok(AbmSeries { replicate: id, points })
}

/// A single replicate (stream 0).
pub fn run_abm(config: &SimConfig) -> Result<AbmSeries> {
    run_replicate(config, 0)
}

/// Replicates `0..replicates`, run in parallel; replicate `r` is identical to
/// what a sequential run of stream `r` would produce.
pub fn run_replicates(config: &SimConfig, replicates: u64) -> Result<Vec<AbmSeries>> {
    config.validate()?;
    (0..replicates)
        .into_par_iter()
        .map(|r| run_replicate(config, r))
        .collect()
}

/// CSV with columns `event_block,p1_hat,p2_hat,replicate_id`.
pub fn series_to_csv(series: &[AbmSeries]) -> String {
    let mut out = String::from("event_block,p1_hat,p2_hat,replicate_id\n");
    for s in series {
        for (b, p1, p2) in &s.points {
            out.push_str(&format!("{b},{p1},{p2},{}\n", s.replicate));
        }
    }
    out
}

/// Nearest asymptotically stable state within `radius` of the terminal share.
pub fn terminal_attribution(series: &AbmSeries, report: &StationaryReport<f64>, radius: f64) -> Option<usize> {
    let end = series.terminal();
    report
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_stable())
        .map(|(i, s)| (i, s.location.dist_inf(&end)))
        .filter(|(_, d)| *d <= radius)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub replicates: usize,
    /// Per-replicate `max_b ‖p̂(b) − p(b)‖∞`.
    pub sup_norm: Vec<f64>,
    /// Per-replicate terminal `‖p̂ − p‖∞`.
    pub terminal_distance: Vec<f64>,
    pub mean_sup_norm: f64,
    pub max_sup_norm: f64,
    pub mean_terminal_distance: f64,
    pub max_terminal_distance: f64,
}

/// Compares ABM series with a deterministic trajectory from the same start,
/// block `b` being matched with time `t = b / δ`.
pub fn compare_to_mean_field(series: &[AbmSeries], trajectory: &TrajectoryResult<f64>, delta: f64) -> DeviationReport {
    let mut sup_norm = Vec::with_capacity(series.len());
    let mut terminal_distance = Vec::with_capacity(series.len());
    for s in series {
        let dev = |&(b, p1, p2): &(usize, f64, f64)| {
            trajectory
                .state_at(b as f64 / delta)
                .dist_inf(&State { p1, p2 })
        };
        sup_norm.push(s.points.iter().map(dev).fold(0.0, f64::max));
        terminal_distance.push(s.points.last().map(dev).unwrap_or(0.0));
    }
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    DeviationReport {
        replicates: series.len(),
        mean_sup_norm: mean(&sup_norm),
        max_sup_norm: max(&sup_norm),
        mean_terminal_distance: mean(&terminal_distance),
        max_terminal_distance: max(&terminal_distance),
        sup_norm,
        terminal_distance,
    }
}
