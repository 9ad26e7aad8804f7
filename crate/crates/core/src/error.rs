use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid game parameters g={g}, l={l}: {reason}")]
    InvalidGame { g: f64, l: f64, reason: &'static str },

    #[error("invalid sample-size distribution: {0}")]
    InvalidDistribution(String),

    #[error("sample size {size} exceeds the supported maximum {max}; theta must have bounded support")]
    SupportTooLarge { size: u32, max: u32 },

    #[error("cannot parse distribution literal `{literal}`: {reason}")]
    DistributionSyntax { literal: String, reason: String },

    #[error("state ({p1}, {p2}) is outside the unit square")]
    StateOutOfRange { p1: f64, p2: f64 },

    #[error("response function is not strictly decreasing on [0,1]")]
    NotMonotone,

    #[error("target value {0} is outside [0,1]")]
    TargetOutOfRange(f64),

    #[error("state ({p1}, {p2}) is not stationary (residual {residual:e})")]
    NotStationary { p1: f64, p2: f64, residual: f64 },

    #[error("nongeneric parameters: threshold {threshold} is an integer in the support of theta")]
    Nongeneric { threshold: f64 },

    #[error("standard-game test requires g = l (got g={g}, l={l})")]
    NotStandardGame { g: f64, l: f64 },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
