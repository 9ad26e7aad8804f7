//! Stationary states of `ṗ₁ = δ(w(p₂) − p₁)`, `ṗ₂ = δ(w(p₁) − p₂)` and
//! their stability.
//!
//! A state is stationary iff `p₂ = w(p₁)` and `p₁ = w(p₂)`, so every
//! stationary state is `(r, w(r))` for a root `r` of `G(p) = w(w(p)) − p`.
//! The Jacobian there is `[[−1, w′(p₂)], [w′(p₁), −1]]` with eigenvalues
//! `−1 ± sqrt(w′(p₁)·w′(p₂))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, State};
use crate::response::ResponseFunction;
use crate::sampling::{self, DynamicsKind, SampleDistribution, Strictness, TieRule};
use crate::Scalar;

/// Half-width of the Marginal band around slope product 1.
pub const MARGINAL_BAND: f64 = 1e-6;
/// Number of points in the sign-change scan of `G` over `[0, 1]`.
pub const SCAN_POINTS: usize = 10_001;
/// Default bisection tolerance for roots of `G`.
pub const ROOT_TOL: f64 = 1e-10;
/// Default residual bound accepted by [`classify`].
pub const STATIONARY_TOL: f64 = 1e-8;
/// Band around 1 inside which the pure-state product is reported as Boundary.
pub const PRODUCT_BAND: f64 = 1e-9;

/// `|G|` below which a sign-preserving local minimum counts as a double root.
const TANGENT_TOL: f64 = 1e-12;
/// `|G|` below which a sign-preserving grid minimum is examined at all.
const TANGENT_SCREEN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    AsymptoticallyStable,
    Unstable,
    Marginal,
    /// Marker for a non-isolated set of stationary states.
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue<T> {
    pub re: T,
    pub im: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryState<T> {
    #[serde(flatten)]
    pub location: State<T>,
    /// `w′(p₁)·w′(p₂)`.
    pub slope_product: T,
    pub eigenvalues: [Eigenvalue<T>; 2],
    pub label: Label,
}

impl<T: Scalar> StationaryState<T> {
    pub fn is_pure(&self) -> bool {
        !self.location.is_interior()
    }

    pub fn is_stable(&self) -> bool {
        self.label == Label::AsymptoticallyStable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryReport<T> {
    pub states: Vec<StationaryState<T>>,
    pub continuum: bool,
    pub warnings: Vec<String>,
}

impl<T: Scalar> StationaryReport<T> {
    pub fn interior(&self) -> impl Iterator<Item = &StationaryState<T>> {
        self.states.iter().filter(|s| s.location.is_interior())
    }

    /// Symmetric interior states, within `tol`.
    pub fn symmetric(&self, tol: T) -> Vec<&StationaryState<T>> {
        self.interior()
            .filter(|s| s.location.is_symmetric_within(tol))
            .collect()
    }

    pub fn stable(&self) -> impl Iterator<Item = &StationaryState<T>> {
        self.states.iter().filter(|s| s.is_stable())
    }

    /// Index of the state nearest to `s` in the sup norm, if within `radius`.
    pub fn nearest(&self, s: &State<T>, radius: T) -> Option<usize> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, st)| (i, st.location.dist_inf(s)))
            .filter(|(_, d)| *d <= radius)
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distances"))
            .map(|(i, _)| i)
    }

    /// JSON list of `{p1, p2, slope_product, eigenvalues, label}`.
    pub fn to_json(&self) -> serde_json::Value
    where
        T: Serialize,
    {
        serde_json::to_value(&self.states).expect("serializable states")
    }
}

pub fn label_for<T: Scalar>(slope_product: T) -> Label {
    let band = T::lit(MARGINAL_BAND);
    if slope_product < T::one() - band {
        Label::AsymptoticallyStable
    } else if slope_product > T::one() + band {
        Label::Unstable
    } else {
        Label::Marginal
    }
}

fn eigenvalues<T: Scalar>(slope_product: T) -> [Eigenvalue<T>; 2] {
    let m1 = -T::one();
    if slope_product >= T::zero() {
        let r = slope_product.sqrt();
        [Eigenvalue { re: m1 + r, im: T::zero() }, Eigenvalue { re: m1 - r, im: T::zero() }]
    } else {
        let r = (-slope_product).sqrt();
        [Eigenvalue { re: m1, im: r }, Eigenvalue { re: m1, im: -r }]
    }
}

fn linearize<T: Scalar>(f: &ResponseFunction<T>, s: State<T>) -> StationaryState<T> {
    // `+ 0` turns a −0 product (flat corner) into +0
    let slope_product = f.derivative(s.p1) * f.derivative(s.p2) + T::zero();
    StationaryState {
        location: s,
        slope_product,
        eigenvalues: eigenvalues(slope_product),
        label: label_for(slope_product),
    }
}

pub fn stationarity_residual<T: Scalar>(f: &ResponseFunction<T>, s: &State<T>) -> T {
    (f.evaluate(s.p1) - s.p2)
        .abs()
        .max((f.evaluate(s.p2) - s.p1).abs())
}

/// Classifies a stationary state; errors if the residual exceeds [`STATIONARY_TOL`].
pub fn classify<T: Scalar>(f: &ResponseFunction<T>, s: State<T>) -> Result<StationaryState<T>> {
    classify_with_tol(f, s, T::lit(STATIONARY_TOL))
}

pub fn classify_with_tol<T: Scalar>(
    f: &ResponseFunction<T>,
    s: State<T>,
    tol: T,
) -> Result<StationaryState<T>> {
    let residual = stationarity_residual(f, &s);
    if residual > tol {
        return Err(Error::NotStationary {
            p1: s.p1.to_f64_lossy(),
            p2: s.p2.to_f64_lossy(),
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(linearize(f, s))
}

fn bisect<T: Scalar>(g: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let mut glo = g(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * T::lit(0.5);
        let gm = g(mid);
        if gm == T::zero() {
            return mid;
        }
        if (gm > T::zero()) == (glo > T::zero()) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

fn golden_min<T: Scalar>(h: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> T {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if hc < hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    (a + b) * T::lit(0.5)
}

/// All stationary states of the two-population dynamics driven by `f`.
///
/// Roots of `G(p) = w(w(p)) − p` are bracketed by sign changes on a fixed
/// grid and refined by bisection to `tol`; sign-preserving grid minima of
/// `|G|` are checked for double roots, which are labelled Marginal. The pure
/// states `(0,1)` and `(1,0)` are always reported. For `w(p) = 1 − p` every
/// `(p, 1 − p)` is stationary and a single Continuum marker at `(½, ½)` is
/// returned instead.
pub fn find_stationary_states<T: Scalar>(f: &ResponseFunction<T>, tol: T) -> StationaryReport<T> {
    if f.is_reflection(T::lit(1e-10)) {
        let half = T::lit(0.5);
        return StationaryReport {
            states: vec![StationaryState {
                location: State::raw(half, half),
                slope_product: T::one(),
                eigenvalues: eigenvalues(T::one()),
                label: Label::Continuum,
            }],
            continuum: true,
            warnings: Vec::new(),
        };
    }

    let g = |p: T| f.second_iterate_residual(p);
    let n = SCAN_POINTS - 1;
    let nf = T::from_count(n);
    let ps: Vec<T> = (0..=n).map(|i| T::from_count(i) / nf).collect();
    let gs: Vec<T> = ps.iter().map(|&p| g(p)).collect();
    let zero = T::zero();

    // (root, tangential)
    let mut roots: Vec<(T, bool)> = vec![(zero, false), (T::one(), false)];
    let mut warnings = Vec::new();

    for i in 1..n {
        if gs[i] == zero {
            roots.push((ps[i], false));
        }
    }
    for i in 1..n - 1 {
        if gs[i] != zero && gs[i + 1] != zero && (gs[i] > zero) != (gs[i + 1] > zero) {
            roots.push((bisect(g, ps[i], ps[i + 1], tol), false));
        }
    }
    // Boundary cells: G vanishes at both endpoints, so probe inside.
    let probe = ps[1] * T::lit(1e-3);
    for (a, b) in [(probe, ps[1]), (T::one() - probe, ps[n - 1])] {
        let (ga, gb) = (g(a), g(b));
        if ga != zero && gb != zero && (ga > zero) != (gb > zero) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            roots.push((bisect(g, lo, hi, tol), false));
        }
    }
    // Double roots: no sign change, but |G| touches zero.
    for i in 2..n - 1 {
        let (l, c, r) = (gs[i - 1], gs[i], gs[i + 1]);
        let same_sign = (l > zero) == (c > zero) && (c > zero) == (r > zero);
        if same_sign
            && c != zero
            && c.abs() < T::lit(TANGENT_SCREEN)
            && c.abs() <= l.abs()
            && c.abs() <= r.abs()
        {
            let p = golden_min(|p| g(p).abs(), ps[i - 1], ps[i + 1], tol);
            if g(p).abs() <= T::lit(TANGENT_TOL) {
                warnings.push(format!("tangential root of w(w(p)) - p near p = {p}"));
                roots.push((p, true));
            }
        }
    }

    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));
    let dedup_radius = tol * T::lit(10.0);
    let mut unique: Vec<(T, bool)> = Vec::new();
    for (r, tangent) in roots {
        match unique.last_mut() {
            Some(last) if (r - last.0).abs() <= dedup_radius => last.1 |= tangent,
            _ => unique.push((r, tangent)),
        }
    }

    let cell = T::one() / nf;
    for pair in unique.windows(2) {
        if pair[1].0 - pair[0].0 < cell * T::lit(10.0) {
            warnings.push(format!(
                "roots {} and {} are closer than 10 grid cells; grid resolution may hide others",
                pair[0].0, pair[1].0
            ));
        }
    }

    let states = unique
        .into_iter()
        .map(|(r, tangent)| {
            let p2 = if r == zero {
                T::one()
            } else if r == T::one() {
                zero
            } else {
                f.evaluate(r).max(zero).min(T::one())
            };
            let mut s = linearize(f, State::raw(r, p2));
            if tangent {
                s.label = Label::Marginal;
            }
            s
        })
        .collect();

    StationaryReport {
        states,
        continuum: false,
        warnings,
    }
}

/// The unique `p` with `w(p) = p` (exists for any decreasing `w` with
/// `w(0) = 1`, `w(1) = 0`).
pub fn symmetric_fixed_point<T: Scalar>(f: &ResponseFunction<T>) -> T {
    bisect(|p| f.evaluate(p) - p, T::zero(), T::one(), T::epsilon())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PureStability {
    Stable,
    Unstable,
    Boundary,
}

/// `E_{<m_h}(θ)·E_{≤m_d}(θ)` (strictness swapped for hawk-favoring ties),
/// which equals `|w′(1)|·|w′(0)|`.
pub fn pure_state_product<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    kind: DynamicsKind,
    tie: TieRule,
) -> T {
    let (at_one, at_zero) = sampling::corner_expectations(game, theta, kind, tie);
    at_one * at_zero + T::zero()
}

/// Closed-form stability of the pure states `(0,1)` and `(1,0)`.
pub fn pure_state_stability<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    kind: DynamicsKind,
    tie: TieRule,
) -> PureStability {
    let product = pure_state_product(game, theta, kind, tie);
    if (product - T::one()).abs() <= T::lit(PRODUCT_BAND) {
        PureStability::Boundary
    } else if product > T::one() {
        PureStability::Unstable
    } else {
        PureStability::Stable
    }
}

/// Standard game `g = l`: does the population converge to a mixed state from
/// almost every interior state?
///
/// Errors when one of `1/g, 1/(1−g), (1+g)/g, (1+g)/(1−g)` is an integer in
/// the support of `θ`, where the answer would depend on the tie rule.
pub fn standard_game_mixed_test<T: Scalar>(
    g: T,
    theta: &SampleDistribution<T>,
    kind: DynamicsKind,
) -> Result<bool> {
    Game::standard(g)?;
    let one = T::one();
    for threshold in [one / g, one / (one - g), (one + g) / g, (one + g) / (one - g)] {
        let nearest = threshold.round();
        if (threshold - nearest).abs() <= T::lit(sampling::TIE_BAND)
            && nearest >= one
            && nearest <= T::from_u32(sampling::MAX_SAMPLE_SIZE).unwrap()
            && theta.contains(nearest.to_u32().expect("small integer"))
        {
            return Err(Error::Nongeneric {
                threshold: threshold.to_f64_lossy(),
            });
        }
    }
    let t1 = theta.mass(1);
    let weak = Strictness::Weak;
    let product = match kind {
        DynamicsKind::ActionSampling => {
            t1 * theta.bounded_expectation((one / g).max(one / (one - g)), weak)
        }
        DynamicsKind::PayoffSampling => {
            if g < one / T::lit(3.0) {
                t1 * theta.bounded_expectation((one + g) / g, weak)
            } else {
                let two = T::lit(2.0);
                (t1 + two * theta.mass(2))
                    * theta.bounded_expectation(T::lit(3.0).max((one + g) / (one - g)), weak)
            }
        }
    };
    Ok(product > one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Convergence to an interior state from almost every initial state.
    GlobalMixed,
    /// The pure states are asymptotically stable and attract an open set.
    PureReachable,
    Boundary,
}

pub fn global_verdict<T: Scalar>(
    game: &Game<T>,
    theta: &SampleDistribution<T>,
    kind: DynamicsKind,
    tie: TieRule,
) -> Verdict {
    match pure_state_stability(game, theta, kind, tie) {
        PureStability::Unstable => Verdict::GlobalMixed,
        PureStability::Stable => Verdict::PureReachable,
        PureStability::Boundary => Verdict::Boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{build_action_response, build_limit_payoff_response, build_payoff_response};

    fn game(g: f64, l: f64) -> Game<f64> {
        Game::new(g, l).unwrap()
    }

    fn dist(s: &str) -> SampleDistribution<f64> {
        SampleDistribution::parse(s).unwrap()
    }

    const DOVE: TieRule = TieRule::DoveFavoring;

    /// Bisection oracle for the root of (1−p)^3 = p.
    fn cubic_root() -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if (1.0 - m).powi(3) - m > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn homogeneous_three_has_three_states() {
        let f = build_action_response(&game(0.25, 0.25), &dist("degenerate:3"), DOVE);
        let rep = find_stationary_states(&f, ROOT_TOL);
        assert!(!rep.continuum);
        assert_eq!(rep.states.len(), 3, "{:?}", rep.states);
        let p = cubic_root();
        assert!((p - 0.3177).abs() < 1e-4);
        let sym = rep.symmetric(1e-8);
        assert_eq!(sym.len(), 1);
        assert!((sym[0].location.p1 - p).abs() < 1e-9);
        assert_eq!(sym[0].label, Label::Unstable);
        let want = 3.0 * (1.0 - p).powi(2);
        assert!((sym[0].slope_product.sqrt() - want).abs() < 1e-8);
        assert!((want - 1.397).abs() < 1e-3);
        for s in rep.states.iter().filter(|s| s.is_pure()) {
            assert_eq!(s.label, Label::AsymptoticallyStable);
        }
    }

    #[test]
    fn unit_samples_give_continuum() {
        let f = build_action_response(&game(0.4, 0.2), &dist("degenerate:1"), DOVE);
        let rep = find_stationary_states(&f, ROOT_TOL);
        assert!(rep.continuum);
        assert_eq!(rep.states.len(), 1);
        assert_eq!(rep.states[0].label, Label::Continuum);
    }

    #[test]
    fn heterogeneous_example_has_five_states() {
        let f = build_action_response(&game(0.04, 0.04), &dist("2:0.3,20:0.7"), DOVE);
        let rep = find_stationary_states(&f, ROOT_TOL);
        assert_eq!(rep.states.len(), 5);
        let sym = rep.symmetric(1e-8);
        assert_eq!(sym.len(), 1);
        assert!((sym[0].location.p1 - 0.2).abs() < 0.01);
        assert_eq!(rep.stable().count(), 3);
    }

    #[test]
    fn classify_limit_payoff_points() {
        let f3 = build_limit_payoff_response::<f64>(3);
        let p3 = symmetric_fixed_point(&f3);
        assert!((p3 - 0.620).abs() < 5e-4);
        let s = classify(&f3, State::new(p3, p3).unwrap()).unwrap();
        assert!((s.slope_product.sqrt() - 0.618).abs() < 5e-4);
        assert_eq!(s.label, Label::AsymptoticallyStable);

        let f20 = build_limit_payoff_response::<f64>(20);
        let p20 = symmetric_fixed_point(&f20);
        assert!((p20 - 0.803).abs() < 5e-4);
        let s = classify(&f20, State::new(p20, p20).unwrap()).unwrap();
        assert!(s.slope_product.sqrt() > 1.0);
        assert_eq!(s.label, Label::Unstable);
    }

    #[test]
    fn classify_rejects_non_stationary() {
        let f = build_limit_payoff_response::<f64>(3);
        let err = classify(&f, State::new(0.620, 0.620).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotStationary { .. }));
    }

    #[test]
    fn slope_product_contrast() {
        let gm = game(0.25, 0.25);
        let kind = DynamicsKind::ActionSampling;
        let th2 = dist("1:0.75,2:0.25");
        let th3 = dist("1:0.75,3:0.25");
        assert_eq!(pure_state_product(&gm, &th2, kind, DOVE), 15.0 / 16.0);
        assert_eq!(pure_state_product(&gm, &th3, kind, DOVE), 9.0 / 8.0);
        assert_eq!(pure_state_stability(&gm, &th2, kind, DOVE), PureStability::Stable);
        assert_eq!(pure_state_stability(&gm, &th3, kind, DOVE), PureStability::Unstable);
        assert_eq!(global_verdict(&gm, &th3, kind, DOVE), Verdict::GlobalMixed);
        assert_eq!(global_verdict(&gm, &th2, kind, DOVE), Verdict::PureReachable);
    }

    #[test]
    fn no_unit_samples_means_stable_pures() {
        for g in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for th in ["degenerate:2", "2:0.5,7:0.5", "3:0.2,4:0.8"] {
                let gm = game(g, 1.0 - g);
                let st = pure_state_stability(&gm, &dist(th), DynamicsKind::ActionSampling, DOVE);
                assert_eq!(st, PureStability::Stable, "g={g} {th}");
            }
        }
    }

    #[test]
    fn standard_game_test_examples() {
        let a = DynamicsKind::ActionSampling;
        let p = DynamicsKind::PayoffSampling;
        assert!(standard_game_mixed_test(0.25, &dist("1:0.75,3:0.25"), a).unwrap());
        assert!(!standard_game_mixed_test(0.25, &dist("1:0.75,2:0.25"), a).unwrap());
        assert!(standard_game_mixed_test(0.25, &dist("1:0.75,3:0.25"), p).unwrap());
        assert!(matches!(
            standard_game_mixed_test(0.25, &dist("1:0.5,4:0.5"), a),
            Err(Error::Nongeneric { .. })
        ));
    }

    #[test]
    fn standard_game_test_agrees_with_product_rule() {
        let gs = [0.05, 0.15, 0.35, 0.45, 0.55, 0.65, 0.85, 0.95];
        let thetas = ["1:0.75,3:0.25", "1:0.6,2:0.1,9:0.3", "uniform:6", "biased1:0.7", "1:0.9,12:0.1"];
        for kind in [DynamicsKind::ActionSampling, DynamicsKind::PayoffSampling] {
            for &g in &gs {
                for th in thetas {
                    let th = dist(th);
                    if let Ok(mixed) = standard_game_mixed_test(g, &th, kind) {
                        let st = pure_state_stability(&game(g, g), &th, kind, DOVE);
                        assert_eq!(mixed, st == PureStability::Unstable, "g={g} {kind:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn action_unstable_implies_payoff_unstable_on_grid() {
        let thetas = ["uniform:4", "biased1:0.5", "1:0.8,5:0.2", "1:0.5,2:0.5"];
        for gi in 1..10 {
            for li in 1..10 {
                let gm = game(gi as f64 / 10.0, li as f64 / 10.0);
                for th in thetas {
                    let th = dist(th);
                    let a = pure_state_stability(&gm, &th, DynamicsKind::ActionSampling, DOVE);
                    let p = pure_state_stability(&gm, &th, DynamicsKind::PayoffSampling, DOVE);
                    if a == PureStability::Unstable {
                        assert_eq!(p, PureStability::Unstable);
                    }
                }
            }
        }
    }

    #[test]
    fn pure_states_numeric_matches_closed_form() {
        for (g, th) in [(0.25, "1:0.75,3:0.25"), (0.25, "1:0.75,2:0.25"), (0.65, "uniform:5")] {
            for kind in [DynamicsKind::ActionSampling, DynamicsKind::PayoffSampling] {
                let gm = game(g, g);
                let th = dist(th);
                let f = match kind {
                    DynamicsKind::ActionSampling => build_action_response(&gm, &th, DOVE),
                    DynamicsKind::PayoffSampling => build_payoff_response(&gm, &th, DOVE),
                };
                let s = classify(&f, State::new(0.0, 1.0).unwrap()).unwrap();
                let closed = pure_state_product(&gm, &th, kind, DOVE);
                assert!((s.slope_product - closed).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let f = build_action_response(&game(0.25, 0.25), &dist("degenerate:3"), DOVE);
        let rep = find_stationary_states(&f, ROOT_TOL);
        let v = rep.to_json();
        let first = &v.as_array().unwrap()[0];
        for key in ["p1", "p2", "slope_product", "eigenvalues", "label"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        assert_eq!(first["label"], "AsymptoticallyStable");
    }

    #[test]
    fn eigenvalues_follow_slope_product() {
        let e = eigenvalues(0.25f64);
        assert_eq!((e[0].re, e[1].re), (-0.5, -1.5));
        let e = eigenvalues(-0.25f64);
        assert_eq!((e[0].re, e[0].im), (-1.0, 0.5));
        assert_eq!(label_for(1.0 + 5e-7), Label::Marginal);
    }
}
