//! Response polynomials against direct enumeration of every binomial outcome.

use hawkdove::response::{build_action_response, build_payoff_response};
use hawkdove::{DynamicsKind, Game64, SampleDistribution, TieRule};
use proptest::prelude::*;

/// C(n, k) by the multiplicative formula, independent of the crate's table.
fn choose(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn pmf(n: u32, i: u32, p: f64) -> f64 {
    choose(n, i) * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32)
}

/// Hawk iff its summed sample payoff beats dove's by more than the tie band;
/// ties go to dove.
fn hawk_wins(hawk_total: f64, dove_total: f64, k: u32) -> bool {
    hawk_total - dove_total > 1e-9 * k as f64
}

/// Action sampling: the sample of `k` opponents with `x` hawks is used as a
/// belief for both actions.
fn asd_oracle(g: f64, l: f64, k: u32, p: f64) -> f64 {
    (0..=k)
        .filter(|&x| hawk_wins((1.0 + g) * (k - x) as f64, k as f64 - l * x as f64, k))
        .map(|x| pmf(k, x, p))
        .sum()
}

/// Payoff sampling: `x` hawks met while testing hawk, `y` while testing dove.
fn psd_oracle(g: f64, l: f64, k: u32, p: f64) -> f64 {
    let mut total = 0.0;
    for x in 0..=k {
        for y in 0..=k {
            if hawk_wins((1.0 + g) * (k - x) as f64, k as f64 - l * y as f64, k) {
                total += pmf(k, x, p) * pmf(k, y, p);
            }
        }
    }
    total
}

fn oracle(kind: DynamicsKind, g: f64, l: f64, theta: &SampleDistribution<f64>, p: f64) -> f64 {
    theta
        .iter()
        .map(|(k, q)| {
            q * match kind {
                DynamicsKind::ActionSampling => asd_oracle(g, l, k, p),
                DynamicsKind::PayoffSampling => psd_oracle(g, l, k, p),
            }
        })
        .sum()
}

fn sup_error(kind: DynamicsKind, g: f64, l: f64, theta: &SampleDistribution<f64>) -> f64 {
    let game = Game64::new(g, l).unwrap();
    let f = match kind {
        DynamicsKind::ActionSampling => build_action_response(&game, theta, TieRule::DoveFavoring),
        DynamicsKind::PayoffSampling => build_payoff_response(&game, theta, TieRule::DoveFavoring),
    };
    (0..=100)
        .map(|i| {
            let p = i as f64 / 100.0;
            (f.evaluate(p) - oracle(kind, g, l, theta, p)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn homogeneous_samples_match_enumeration_on_grid() {
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    for kind in [DynamicsKind::ActionSampling, DynamicsKind::PayoffSampling] {
        for &g in &grid {
            for &l in &grid {
                for k in 1..=8 {
                    let theta = SampleDistribution::degenerate(k).unwrap();
                    let err = sup_error(kind, g, l, &theta);
                    assert!(err < 1e-10, "{kind:?} g={g} l={l} k={k}: {err:e}");
                }
            }
        }
    }
}

fn theta_strategy() -> impl Strategy<Value = SampleDistribution<f64>> {
    prop::collection::vec((1u32..=8, 0.01f64..1.0), 1..5).prop_map(|raw| {
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        SampleDistribution::new(raw.into_iter().map(|(k, w)| (k, w / total))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixtures_match_enumeration(
        theta in theta_strategy(),
        gi in 1usize..=9,
        li in 1usize..=9,
        payoff in any::<bool>(),
    ) {
        let kind = if payoff { DynamicsKind::PayoffSampling } else { DynamicsKind::ActionSampling };
        let err = sup_error(kind, gi as f64 / 10.0, li as f64 / 10.0, &theta);
        prop_assert!(err < 1e-10, "{err:e}");
    }
}
