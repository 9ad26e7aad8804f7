//! Sample-size distributions and the reply rules of revising agents.
//!
//! A revising agent with sample size `k` either observes `k` opponent actions
//! (action sampling) or tests each of her actions against `k` fresh opponents
//! (payoff sampling). Ties are broken by an explicit [`TieRule`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Action, Game};
use crate::Scalar;

/// Largest admissible sample size.
pub const MAX_SAMPLE_SIZE: u32 = 64;

/// Absolute band (per unit of sample size) inside which two payoff sums, or
/// a sample size and a real threshold, are treated as equal.
pub const TIE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TieRule {
    #[default]
    #[serde(rename = "dove", alias = "DoveFavoring")]
    DoveFavoring,
    #[serde(rename = "hawk", alias = "HawkFavoring")]
    HawkFavoring,
}

impl TieRule {
    fn resolve(self) -> Action {
        match self {
            TieRule::DoveFavoring => Action::Dove,
            TieRule::HawkFavoring => Action::Hawk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynamicsKind {
    #[serde(rename = "action", alias = "ActionSampling")]
    ActionSampling,
    #[serde(rename = "payoff", alias = "PayoffSampling")]
    PayoffSampling,
}

impl fmt::Display for DynamicsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DynamicsKind::ActionSampling => "action",
            DynamicsKind::PayoffSampling => "payoff",
        })
    }
}

/// Whether a bounded expectation includes its upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// `k < m`
    Strict,
    /// `k ≤ m`
    Weak,
}

impl Strictness {
    /// Integer-vs-real comparison with the tie band.
    pub fn admits<T: Scalar>(self, k: u32, m: T) -> bool {
        let k = T::from_u32(k).expect("sample size");
        let band = T::lit(TIE_BAND);
        match self {
            Strictness::Strict => k < m - band,
            Strictness::Weak => k <= m + band,
        }
    }
}

/// Finite probability distribution over positive sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDistribution<T> {
    atoms: Vec<(u32, T)>,
}

impl<T: Scalar> SampleDistribution<T> {
    /// Builds from `(size, mass)` pairs. Zero masses are dropped; repeated
    /// sizes are merged.
    pub fn new(atoms: impl IntoIterator<Item = (u32, T)>) -> Result<Self> {
        let mut merged: Vec<(u32, T)> = Vec::new();
        for (k, q) in atoms {
            if k == 0 {
                return Err(Error::InvalidDistribution("sample size 0".into()));
            }
            if k > MAX_SAMPLE_SIZE {
                return Err(Error::SupportTooLarge {
                    size: k,
                    max: MAX_SAMPLE_SIZE,
                });
            }
            if !q.is_finite() || q < T::zero() {
                return Err(Error::InvalidDistribution(format!(
                    "mass {q} for size {k} is not a nonnegative number"
                )));
            }
            if q == T::zero() {
                continue;
            }
            match merged.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, m)) => *m = *m + q,
                None => merged.push((k, q)),
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        merged.sort_by_key(|(k, _)| *k);
        let total: T = merged.iter().map(|(_, q)| *q).sum();
        if (total - T::one()).abs() > T::mass_tolerance() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Self { atoms: merged })
    }

    /// `θ ≡ k`.
    pub fn degenerate(k: u32) -> Result<Self> {
        Self::new([(k, T::one())])
    }

    /// Uniform on `{1, …, k}`.
    pub fn uniform(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDistribution("uniform:0".into()));
        }
        let q = T::one() / T::from_u32(k).unwrap();
        Self::new((1..=k).map(|i| (i, q)))
    }

    /// 1-biased family: share `q` has sample size one, the rest is uniform on
    /// `{1, …, 10}`.
    pub fn biased1(q: T) -> Result<Self> {
        if !(q >= T::zero() && q <= T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "biased1 share {q} outside [0,1]"
            )));
        }
        let tenth = (T::one() - q) / T::lit(10.0);
        Self::new((1..=10).map(|k| (k, if k == 1 { tenth + q } else { tenth })))
    }

    pub fn atoms(&self) -> &[(u32, T)] {
        &self.atoms
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.atoms.iter().copied()
    }

    pub fn mass(&self, k: u32) -> T {
        self.atoms
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or(T::zero(), |(_, q)| *q)
    }

    pub fn max_support(&self) -> u32 {
        self.atoms.last().map(|(k, _)| *k).unwrap_or(0)
    }

    pub fn contains(&self, k: u32) -> bool {
        self.atoms.iter().any(|(kk, _)| *kk == k)
    }

    pub fn is_degenerate(&self) -> Option<u32> {
        match self.atoms.as_slice() {
            [(k, _)] => Some(*k),
            _ => None,
        }
    }

    pub fn mean(&self) -> T {
        self.iter().map(|(k, q)| q * T::from_u32(k).unwrap()).sum()
    }

    /// `Σ θ(k)·k` over sample sizes `k < m` (strict) or `k ≤ m` (weak).
    pub fn bounded_expectation(&self, m: T, strictness: Strictness) -> T {
        self.iter()
            .filter(|(k, _)| strictness.admits(*k, m))
            .map(|(k, q)| q * T::from_u32(k).unwrap())
            .sum()
    }

    /// Canonical `"k:mass,..."` literal.
    pub fn literal(&self) -> String {
        self.atoms
            .iter()
            .map(|(k, q)| format!("{k}:{q}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `"k1:m1,k2:m2,..."`, `degenerate:k`, `uniform:k` or `biased1:q`.
    pub fn parse(literal: &str) -> Result<Self> {
        let syntax = |reason: String| Error::DistributionSyntax {
            literal: literal.to_string(),
            reason,
        };
        let trimmed = literal.trim();
        let (head, tail) = trimmed
            .split_once(':')
            .ok_or_else(|| syntax("expected `size:mass` pairs or `family:parameter`".into()))?;
        let family = head.trim();
        let param = tail.trim();
        let parse_k = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|e| syntax(format!("bad sample size `{s}`: {e}")))
        };
        match family {
            "degenerate" => Self::degenerate(parse_k(param)?),
            "uniform" => Self::uniform(parse_k(param)?),
            "biased1" => {
                let q = param
                    .strip_suffix('%')
                    .map(|pct| pct.parse::<f64>().map(|v| v / 100.0))
                    .unwrap_or_else(|| param.parse::<f64>())
                    .map_err(|e| syntax(format!("bad share `{param}`: {e}")))?;
                Self::biased1(T::lit(q))
            }
            _ => {
                let mut atoms = Vec::new();
                for pair in trimmed.split(',') {
                    let (k, q) = pair
                        .split_once(':')
                        .ok_or_else(|| syntax(format!("`{pair}` is not `size:mass`")))?;
                    let k = parse_k(k.trim())?;
                    let q = q
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| syntax(format!("bad mass `{q}`: {e}")))?;
                    atoms.push((k, T::lit(q)));
                }
                Self::new(atoms)
            }
        }
    }
}

impl<T: Scalar> FromStr for SampleDistribution<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Single-deviation thresholds `m_h`, `m_d` for one dynamics kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds<T> {
    /// Largest sample in which one `d` among hawks can still induce `h`.
    pub m_h: T,
    /// Largest sample in which one `h` among doves can still induce `d`.
    pub m_d: T,
}

pub fn thresholds<T: Scalar>(game: &Game<T>, kind: DynamicsKind) -> Thresholds<T> {
    let (g, l, one) = (game.g(), game.l(), T::one());
    match kind {
        DynamicsKind::ActionSampling => Thresholds {
            m_h: one + g / (one - l),
            m_d: one + (one - l) / g,
        },
        DynamicsKind::PayoffSampling => Thresholds {
            m_h: (one + g) / (one - l),
            m_d: (one + g) / g,
        },
    }
}

fn decide<T: Scalar>(hawk_minus_dove: T, k: u32, tie: TieRule) -> Action {
    let band = T::lit(TIE_BAND) * T::from_u32(k.max(1)).unwrap();
    if hawk_minus_dove > band {
        Action::Hawk
    } else if hawk_minus_dove < -band {
        Action::Dove
    } else {
        tie.resolve()
    }
}

/// Best reply to `k` observed opponents of which `hawks` play hawk.
///
/// Hawk earns `(1+g)(k−X)` against the sample, dove earns `k − lX`; hawk is
/// chosen iff `X/k < g/(1+g−l)`.
pub fn action_best_reply<T: Scalar>(game: &Game<T>, tie: TieRule, hawks: u32, k: u32) -> Action {
    debug_assert!(k >= 1 && hawks <= k);
    let (kf, x) = (T::from_u32(k).unwrap(), T::from_u32(hawks).unwrap());
    let hawk_sum = (T::one() + game.g()) * (kf - x);
    let dove_sum = kf - game.l() * x;
    decide(hawk_sum - dove_sum, k, tie)
}

/// Payoff-sampling choice: hawk was tried against `k` opponents containing
/// `hawks_in_h_sample` hawks, dove against `k` others with `hawks_in_d_sample`.
///
/// Hawk is chosen iff `(1+g)X < gk + lY`.
pub fn payoff_best_reply<T: Scalar>(
    game: &Game<T>,
    tie: TieRule,
    hawks_in_h_sample: u32,
    hawks_in_d_sample: u32,
    k: u32,
) -> Action {
    debug_assert!(k >= 1 && hawks_in_h_sample <= k && hawks_in_d_sample <= k);
    let kf = T::from_u32(k).unwrap();
    let x = T::from_u32(hawks_in_h_sample).unwrap();
    let y = T::from_u32(hawks_in_d_sample).unwrap();
    let hawk_sum = (T::one() + game.g()) * (kf - x);
    let dove_sum = kf - game.l() * y;
    decide(hawk_sum - dove_sum, k, tie)
}

/// Whether one rare action in an otherwise uniform sample of size `k` changes
/// the reply, evaluated directly on the extreme samples.
///
/// A rare `d` is placed among hawks (in the hawk-trial under payoff sampling);
/// a rare `h` among doves (likewise in the hawk-trial, the dove-trial seeing
/// only doves).
pub fn single_deviation_flips<T: Scalar>(
    game: &Game<T>,
    kind: DynamicsKind,
    tie: TieRule,
    k: u32,
    rare: Action,
) -> bool {
    let reply = |x: u32, y: u32| match kind {
        DynamicsKind::ActionSampling => action_best_reply(game, tie, x, k),
        DynamicsKind::PayoffSampling => payoff_best_reply(game, tie, x, y, k),
    };
    match rare {
        Action::Dove => reply(k - 1, k) != reply(k, k),
        Action::Hawk => reply(1, 0) != reply(0, 0),
    }
}

/// The inequality on `k` that decides a single deviation, as a threshold test.
///
/// Under [`TieRule::DoveFavoring`] a rare `d` flips iff `k < m_h` and a rare
/// `h` flips iff `k ≤ m_d`; the hawk-favoring rule swaps strict and weak.
pub fn flip_strictness(tie: TieRule, rare: Action) -> Strictness {
    match (tie, rare) {
        (TieRule::DoveFavoring, Action::Dove) | (TieRule::HawkFavoring, Action::Hawk) => {
            Strictness::Strict
        }
        _ => Strictness::Weak,
    }
}

/// Threshold form of [`single_deviation_flips`].
pub fn threshold_flips<T: Scalar>(
    game: &Game<T>,
    kind: DynamicsKind,
    tie: TieRule,
    k: u32,
    rare: Action,
) -> bool {
    let t = thresholds(game, kind);
    let m = match rare {
        Action::Dove => t.m_h,
        Action::Hawk => t.m_d,
    };
    flip_strictness(tie, rare).admits(k, m)
}

/// `(E_{<m_h}(θ), E_{≤m_d}(θ))` with strictness following the tie rule.
///
/// These are the predicted slope magnitudes `|w′(1)|` and `|w′(0)|`.
pub fn corner_expectations<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    kind: DynamicsKind,
    tie: TieRule,
) -> (T, T) {
    let t = thresholds(game, kind);
    (
        theta.bounded_expectation(t.m_h, flip_strictness(tie, Action::Dove)),
        theta.bounded_expectation(t.m_d, flip_strictness(tie, Action::Hawk)),
    )
}

/// The ten values of `g` in the sweep grid, `0.05, 0.15, …, 0.95`.
pub fn sweep_gains() -> Vec<f64> {
    (0..10).map(|i| (5.0 + 10.0 * i as f64) / 100.0).collect()
}

/// The 27 sweep distributions with their literal ids: degenerate and uniform
/// for `k = 2..10`, then `biased1` for `q = 10%..90%`.
pub fn sweep_distributions<T: Scalar>() -> Vec<(String, SampleDistribution<T>)> {
    let mut out = Vec::with_capacity(27);
    for k in 2..=10 {
        out.push((format!("degenerate:{k}"), SampleDistribution::degenerate(k).unwrap()));
    }
    for k in 2..=10 {
        out.push((format!("uniform:{k}"), SampleDistribution::uniform(k).unwrap()));
    }
    for pct in (10..=90).step_by(10) {
        let q = T::lit(pct as f64 / 100.0);
        out.push((format!("biased1:{pct}%"), SampleDistribution::biased1(q).unwrap()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(g: f64, l: f64) -> Game<f64> {
        Game::new(g, l).unwrap()
    }

    fn grid() -> Vec<f64> {
        (0..10).map(|i| 0.05 + 0.1 * i as f64).collect()
    }

    #[test]
    fn bounded_expectation_examples() {
        let th = SampleDistribution::<f64>::parse("1:0.75,2:0.25").unwrap();
        assert!((th.bounded_expectation(4.0, Strictness::Weak) - 1.25).abs() < 1e-15);
        assert_eq!(th.bounded_expectation(1.0, Strictness::Strict), 0.0);
        let u = SampleDistribution::<f64>::uniform(3).unwrap();
        assert!((u.bounded_expectation(2.0, Strictness::Weak) - 1.0).abs() < 1e-15);
        assert!((u.bounded_expectation(2.0, Strictness::Strict) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bounded_expectation_is_monotone_and_capped() {
        let th = SampleDistribution::<f64>::biased1(0.3).unwrap();
        let mean = th.mean();
        let mut last = 0.0;
        for i in 0..=120 {
            let m = i as f64 * 0.1;
            let lt = th.bounded_expectation(m, Strictness::Strict);
            let le = th.bounded_expectation(m, Strictness::Weak);
            assert!(lt <= le && le <= mean + 1e-15);
            assert!(lt >= last);
            last = lt;
        }
    }

    #[test]
    fn threshold_examples() {
        let t = thresholds(&game(0.25, 0.25), DynamicsKind::ActionSampling);
        assert!((t.m_h - 4.0 / 3.0).abs() < 1e-15 && (t.m_d - 4.0).abs() < 1e-15);
        let t = thresholds(&game(0.25, 0.25), DynamicsKind::PayoffSampling);
        assert!((t.m_h - 5.0 / 3.0).abs() < 1e-15 && (t.m_d - 5.0).abs() < 1e-15);
        let t = thresholds(&game(0.5, 0.5), DynamicsKind::ActionSampling);
        assert_eq!((t.m_h, t.m_d), (2.0, 2.0));
    }

    #[test]
    fn action_thresholds_below_payoff_thresholds() {
        for g in grid() {
            for l in grid() {
                let a = thresholds(&game(g, l), DynamicsKind::ActionSampling);
                let p = thresholds(&game(g, l), DynamicsKind::PayoffSampling);
                assert!(a.m_h < p.m_h && a.m_d < p.m_d, "g={g} l={l}");
            }
        }
    }

    #[test]
    fn action_reply_examples() {
        let gm = game(0.25, 0.25);
        let dove = TieRule::DoveFavoring;
        assert_eq!(action_best_reply(&gm, dove, 1, 4), Action::Dove);
        assert_eq!(action_best_reply(&gm, TieRule::HawkFavoring, 1, 4), Action::Hawk);
        assert_eq!(action_best_reply(&gm, dove, 0, 4), Action::Hawk);
        for g in grid() {
            assert_eq!(action_best_reply(&game(g, 0.3), dove, 1, 1), Action::Dove);
        }
    }

    #[test]
    fn payoff_reply_examples() {
        let gm = game(0.25, 0.25);
        let dove = TieRule::DoveFavoring;
        assert_eq!(payoff_best_reply(&gm, dove, 0, 1, 1), Action::Hawk);
        assert_eq!(payoff_best_reply(&gm, dove, 1, 1, 1), Action::Dove);
        for g in grid() {
            assert_eq!(payoff_best_reply(&game(g, 0.7), dove, 0, 0, 1), Action::Hawk);
        }
    }

    #[test]
    fn single_deviation_examples() {
        let gm = game(0.25, 0.25);
        let dove = TieRule::DoveFavoring;
        assert!(single_deviation_flips(&gm, DynamicsKind::ActionSampling, dove, 1, Action::Dove));
        assert!(single_deviation_flips(&gm, DynamicsKind::ActionSampling, dove, 4, Action::Hawk));
        assert!(!single_deviation_flips(&gm, DynamicsKind::PayoffSampling, dove, 6, Action::Hawk));
        assert!(single_deviation_flips(&gm, DynamicsKind::PayoffSampling, dove, 5, Action::Hawk));
    }

    #[test]
    fn single_deviation_matches_thresholds_on_grid() {
        for g in grid() {
            for l in grid() {
                let gm = game(g, l);
                for kind in [DynamicsKind::ActionSampling, DynamicsKind::PayoffSampling] {
                    for tie in [TieRule::DoveFavoring, TieRule::HawkFavoring] {
                        for k in 1..=30 {
                            for rare in [Action::Hawk, Action::Dove] {
                                assert_eq!(
                                    single_deviation_flips(&gm, kind, tie, k, rare),
                                    threshold_flips(&gm, kind, tie, k, rare),
                                    "g={g} l={l} {kind:?} {tie:?} k={k} rare={rare:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_literals_and_families() {
        let th = SampleDistribution::<f64>::parse("1:0.75,3:0.25").unwrap();
        assert_eq!(th.atoms(), &[(1, 0.75), (3, 0.25)]);
        assert_eq!(th.max_support(), 3);
        let d = SampleDistribution::<f64>::parse("degenerate:7").unwrap();
        assert_eq!(d.is_degenerate(), Some(7));
        let u = SampleDistribution::<f64>::parse("uniform:4").unwrap();
        assert_eq!(u.atoms().len(), 4);
        let b = SampleDistribution::<f64>::parse("biased1:0.3").unwrap();
        assert!((b.mass(1) - 0.37).abs() < 1e-15);
        assert!((b.mass(10) - 0.07).abs() < 1e-15);
        let b2 = SampleDistribution::<f64>::parse("biased1:30%").unwrap();
        assert_eq!(b, b2);
    }

    #[test]
    fn sweep_grid_shape() {
        let d = sweep_distributions::<f64>();
        assert_eq!(d.len(), 27);
        for (id, theta) in &d {
            assert_eq!(&SampleDistribution::<f64>::parse(id).unwrap(), theta);
        }
        let g = sweep_gains();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[9], 0.95);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            SampleDistribution::<f64>::parse("1:0.5,2:0.4"),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            SampleDistribution::<f64>::parse("garbage"),
            Err(Error::DistributionSyntax { .. })
        ));
        assert!(matches!(
            SampleDistribution::<f64>::parse("0:1"),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            SampleDistribution::<f64>::parse("degenerate:65"),
            Err(Error::SupportTooLarge { .. })
        ));
        assert!(SampleDistribution::<f64>::parse("1:-0.5,2:1.5").is_err());
    }
}
