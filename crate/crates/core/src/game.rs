//! The generalized hawk–dove game.
//!
//! Payoffs are normalized so that two hawks get 0 and two doves get 1. A hawk
//! meeting a dove gains `g`, the dove loses `l`:
//!
//! |       | h     | d     |
//! |-------|-------|-------|
//! | **h** | 0     | 1 + g |
//! | **d** | 1 − l | 1     |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    #[serde(alias = "h")]
    Hawk,
    #[serde(alias = "d")]
    Dove,
}

impl Action {
    pub fn other(self) -> Self {
        match self {
            Action::Hawk => Action::Dove,
            Action::Dove => Action::Hawk,
        }
    }
}

/// Which parameter domain a [`Game`] is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// `g, l ∈ (0, 1)`.
    #[default]
    Strict,
    /// `g > 0`, `l < 1`, `g + l > 0`.
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Game<T> {
    g: T,
    l: T,
    mode: ValidationMode,
}

impl<T: Scalar> Game<T> {
    /// Strict-mode game.
    pub fn new(g: T, l: T) -> Result<Self> {
        Self::with_mode(g, l, ValidationMode::Strict)
    }

    pub fn with_mode(g: T, l: T, mode: ValidationMode) -> Result<Self> {
        let err = |reason| Error::InvalidGame {
            g: g.to_f64_lossy(),
            l: l.to_f64_lossy(),
            reason,
        };
        if !g.is_finite() || !l.is_finite() {
            return Err(err("parameters must be finite"));
        }
        match mode {
            ValidationMode::Strict => {
                if !(g > T::zero() && g < T::one()) {
                    return Err(err("strict mode requires 0 < g < 1"));
                }
                if !(l > T::zero() && l < T::one()) {
                    return Err(err("strict mode requires 0 < l < 1"));
                }
            }
            ValidationMode::Extended => {
                if g <= T::zero() {
                    return Err(err("extended mode requires g > 0"));
                }
                if l >= T::one() {
                    return Err(err("extended mode requires l < 1"));
                }
                if g + l <= T::zero() {
                    return Err(err("extended mode requires g + l > 0"));
                }
            }
        }
        Ok(Self { g, l, mode })
    }

    /// The standard hawk–dove game `g = l`.
    pub fn standard(g: T) -> Result<Self> {
        Self::new(g, g)
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    pub fn payoff(&self, own: Action, opp: Action) -> T {
        match (own, opp) {
            (Action::Hawk, Action::Hawk) => T::zero(),
            (Action::Hawk, Action::Dove) => T::one() + self.g,
            (Action::Dove, Action::Hawk) => T::one() - self.l,
            (Action::Dove, Action::Dove) => T::one(),
        }
    }

    /// Bilinear extension of the payoff to hawk shares.
    pub fn mixed_payoff(&self, p_own: T, p_opp: T) -> T {
        let one = T::one();
        p_own * (one - p_opp) * (one + self.g)
            + (one - p_own) * p_opp * (one - self.l)
            + (one - p_own) * (one - p_opp)
    }

    /// Hawk weight `g / (1 + g − l)` of the mixed Nash equilibrium.
    ///
    /// It is also the critical hawk frequency of a sample: hawk is the unique
    /// best reply iff the observed hawk frequency is strictly below it.
    pub fn nash_hawk_share(&self) -> T {
        self.g / (T::one() + self.g - self.l)
    }

    /// `(hawk probability, expected payoff)` of the mixed Nash equilibrium.
    pub fn mixed_nash(&self) -> (T, T) {
        let one = T::one();
        let denom = one + self.g - self.l;
        (self.g / denom, (one + self.g) * (one - self.l) / denom)
    }
}

/// Hawk shares `(p1, p2)` of the two populations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State<T> {
    pub p1: T,
    pub p2: T,
}

impl<T: Scalar> State<T> {
    pub fn new(p1: T, p2: T) -> Result<Self> {
        let unit = |p: T| p >= T::zero() && p <= T::one();
        if unit(p1) && unit(p2) {
            Ok(Self { p1, p2 })
        } else {
            Err(Error::StateOutOfRange {
                p1: p1.to_f64_lossy(),
                p2: p2.to_f64_lossy(),
            })
        }
    }

    /// Constructs without range checks; callers guarantee the unit square.
    pub(crate) fn raw(p1: T, p2: T) -> Self {
        Self { p1, p2 }
    }

    pub fn is_interior(&self) -> bool {
        let open = |p: T| p > T::zero() && p < T::one();
        open(self.p1) && open(self.p2)
    }

    pub fn is_symmetric(&self) -> bool {
        self.p1 == self.p2
    }

    pub fn is_symmetric_within(&self, tol: T) -> bool {
        (self.p1 - self.p2).abs() <= tol
    }

    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2,
            p2: self.p1,
        }
    }

    pub fn dist_inf(&self, other: &Self) -> T {
        (self.p1 - other.p1).abs().max((self.p2 - other.p2).abs())
    }

    pub fn clamped(self) -> Self {
        let c = |p: T| p.max(T::zero()).min(T::one());
        Self {
            p1: c(self.p1),
            p2: c(self.p2),
        }
    }
}
