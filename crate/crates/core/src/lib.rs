//! Exact stopping-time and outcome distributions for the Band or Bump card
//! game, with independent oracles and analysis tools.
//!
//! All probabilities are exact [`Rational`]s built on arbitrary-precision
//! [`Integer`]s. Generic pieces (rectangle weights, log-concavity checks) work
//! over any coefficient ring or ordered field from `num-traits`.

pub mod analysis;
pub mod bandbump;
pub mod error;
pub mod exactnum;
pub mod hypergeom;
pub mod oracle;
pub mod table;
pub mod verify;

pub use bandbump::{joint_distribution, Engine, GameParams, JointDistribution, Outcome, Regime, Row};
pub use error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;

/// Canonical arbitrary-precision rational; every probability has this type.
pub type Rational = num_rational::BigRational;
