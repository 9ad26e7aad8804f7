//! The standard-game grid: every `g` in the sweep gains with `l = g`, every
//! sweep distribution, both dynamics.

use hawkdove::equilibria::{self, find_stationary_states, ROOT_TOL};
use hawkdove::flow::{estimate_basins_with, IntegratorConfig};
use hawkdove::sampling::{sweep_distributions, sweep_gains};
use hawkdove::{DynamicsKind, Environment, Game64, Label, SampleDistribution, TieRule, Verdict};
use rayon::prelude::*;
use serde::Serialize;

/// Basin share needed for a "global" verdict.
pub const GLOBAL_SHARE: f64 = 0.99;
/// Share each of two attractors must hold for a Multistable verdict.
pub const MULTI_SHARE: f64 = 0.05;
pub const DEFAULT_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVerdict {
    GlobalPure,
    GlobalMixedSymmetric,
    MixedOther,
    Multistable,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub distribution: String,
    pub dynamics: DynamicsKind,
    pub states: usize,
    pub pure_label: Option<Label>,
    pub symmetric_label: Option<Label>,
    pub global_verdict: Option<Verdict>,
    pub basin_pure: f64,
    pub basin_symmetric: f64,
    pub basin_other: f64,
    pub unattributed: f64,
    pub verdict: Option<SweepVerdict>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub gains: Vec<f64>,
    pub distributions: Vec<(String, SampleDistribution<f64>)>,
    pub dynamics: Vec<DynamicsKind>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            gains: sweep_gains(),
            distributions: sweep_distributions(),
            dynamics: vec![DynamicsKind::ActionSampling, DynamicsKind::PayoffSampling],
        }
    }
}

impl Grid {
    /// Cells in output order: dynamics, then gain, then distribution.
    pub fn cells(&self) -> Vec<(DynamicsKind, f64, String, SampleDistribution<f64>)> {
        let mut out = Vec::new();
        for &kind in &self.dynamics {
            for &g in &self.gains {
                for (id, theta) in &self.distributions {
                    out.push((kind, g, id.clone(), theta.clone()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Basin samples per cell; 0 skips basins and verdicts (labels only).
    pub samples: usize,
    pub seed: u64,
    pub integrator: IntegratorConfig<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            integrator: IntegratorConfig::default(),
        }
    }
}

/// Verdict from basin fractions and the closed-form pure-state test.
pub fn verdict(
    global_verdict: Verdict,
    any_marginal: bool,
    basin_symmetric: f64,
    basin_pure: f64,
    attractor_shares: &[f64],
) -> SweepVerdict {
    if global_verdict == Verdict::Boundary || any_marginal {
        SweepVerdict::Boundary
    } else if global_verdict == Verdict::GlobalMixed && basin_symmetric >= GLOBAL_SHARE {
        SweepVerdict::GlobalMixedSymmetric
    } else if basin_pure >= GLOBAL_SHARE {
        SweepVerdict::GlobalPure
    } else if attractor_shares.iter().filter(|&&s| s >= MULTI_SHARE).count() >= 2 {
        SweepVerdict::Multistable
    } else {
        SweepVerdict::MixedOther
    }
}

pub fn run_cell(g: f64, id: &str, theta: &SampleDistribution<f64>, kind: DynamicsKind, opts: &SweepOptions) -> SweepRow {
    let mut row = SweepRow {
        g,
        distribution: id.to_string(),
        dynamics: kind,
        states: 0,
        pure_label: None,
        symmetric_label: None,
        global_verdict: None,
        basin_pure: 0.0,
        basin_symmetric: 0.0,
        basin_other: 0.0,
        unattributed: 0.0,
        verdict: None,
        error: None,
    };
    let game = match Game64::new(g, g) {
        Ok(game) => game,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let env = Environment::new(game, theta.clone(), kind);
    let f = env.response();
    let report = find_stationary_states(&f, ROOT_TOL);
    row.states = report.states.len();
    row.pure_label = report.states.iter().find(|s| s.is_pure()).map(|s| s.label);
    row.symmetric_label = report.symmetric(1e-8).first().map(|s| s.label);
    let t1 = equilibria::global_verdict(&game, theta, kind, TieRule::DoveFavoring);
    row.global_verdict = Some(t1);
    if report.continuum {
        row.error = Some("continuum of stationary states".into());
        return row;
    }
    if opts.samples == 0 {
        return row;
    }
    let basins = estimate_basins_with(&f, &report, opts.samples, opts.seed, &opts.integrator);
    for (share, state) in basins.shares.iter().zip(&report.states) {
        if state.is_pure() {
            row.basin_pure += share.fraction;
        } else if state.location.is_symmetric_within(1e-8) {
            row.basin_symmetric += share.fraction;
        } else {
            row.basin_other += share.fraction;
        }
    }
    row.unattributed = basins.unattributed_fraction;
    let shares: Vec<f64> = basins.shares.iter().map(|s| s.fraction).collect();
    let marginal = report.states.iter().any(|s| s.label == Label::Marginal);
    row.verdict = Some(verdict(t1, marginal, row.basin_symmetric, row.basin_pure, &shares));
    row
}

/// All cells, computed in parallel; row order follows [`Grid::cells`].
pub fn run_sweep(grid: &Grid, opts: &SweepOptions) -> Vec<SweepRow> {
    grid.cells()
        .par_iter()
        .map(|(kind, g, id, theta)| run_cell(*g, id, theta, *kind, opts))
        .collect()
}

fn label_str(l: Option<Label>) -> String {
    l.map(|l| format!("{l:?}")).unwrap_or_default()
}

pub const CSV_HEADER: &str = "g,distribution,dynamics,states,pure_label,symmetric_label,global_verdict,basin_pure,basin_symmetric,basin_other,unattributed,verdict,error";

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.g,
            r.distribution,
            r.dynamics,
            r.states,
            label_str(r.pure_label),
            label_str(r.symmetric_label),
            r.global_verdict.map(|v| format!("{v:?}")).unwrap_or_default(),
            r.basin_pure,
            r.basin_symmetric,
            r.basin_other,
            r.unattributed,
            r.verdict.map(|v| format!("{v:?}")).unwrap_or_default(),
            r.error.as_deref().unwrap_or("").replace(',', ";"),
        ));
    }
    s
}
