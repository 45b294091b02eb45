//! Exact-arithmetic toolkit for two-item, two-point auctions with additive
//! buyers: closed-form optimal revenues, explicit optimal mechanisms under
//! dominant-strategy and Bayesian incentive compatibility, exhaustive
//! constraint audits, and an exact LP oracle that certifies the formulas.

pub mod audit;
pub mod cli;
pub mod closed_form;
pub mod continuous;
pub mod error;
pub mod lp;
pub mod mechanism;
pub mod model;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
