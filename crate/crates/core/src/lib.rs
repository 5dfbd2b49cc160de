//! Quantifies how well two information sources can be told apart when an
//! adversary may distort the output of one of them under a budget.
//!
//! The toolkit revolves around a source-identification game between a
//! defender, who tests whether a sequence was emitted by a reference source,
//! and an attacker, who rewrites symbols of a sequence from the other source
//! while respecting a distortion constraint. Everything the game needs is
//! here:
//!
//! * [`pmf`] — probability mass functions over contiguous integer alphabets,
//!   empirical types, CDFs, and seeded sequence sampling.
//! * [`divergence`] — KL divergence and the generalized log-likelihood ratio
//!   statistic used when the reference source is known only through training
//!   data. All values are in bits.
//! * [`transport`] — discrete optimal transport: the greedy north-west-corner
//!   solver for Monge costs, an exact min-cost-flow oracle for arbitrary
//!   costs, closed forms, and a brute-force plan enumerator for testing.
//! * [`secmargin`] — security margins: the largest attacker budget under
//!   which the sources stay distinguishable, for discrete sources (earth
//!   mover distance), continuous sources (quantile coupling), and the
//!   max-shift (L-infinity) metric.
//! * [`attack`] — synthesis of the attacker's optimal transportation map and
//!   its application to concrete sequences.
//! * [`gamesim`] — the defender's acceptance tests, theoretical
//!   false-negative error exponents, and a seeded Monte Carlo simulator of
//!   the full game.
//!
//! Logarithms are base 2 throughout; exponents and divergences are in bits.

use thiserror::Error;

pub mod attack;
pub mod continuous;
pub mod cost;
pub mod divergence;
pub mod gamesim;
mod optim;
pub mod pmf;
pub mod secmargin;
pub mod transport;

pub use attack::{
    apply_map_to_sequence, optimal_attack_map, optimal_attack_map_linf, optimal_attack_map_tr,
    AttackSolution, BudgetMetric, DistortionBudget,
};
pub use continuous::ContinuousSource;
pub use cost::CostSpec;
pub use divergence::{h_c, kl_divergence, Bits};
pub use gamesim::{
    defender_accepts_ks, defender_accepts_tr, fn_error_exponent, fn_error_exponent_lambda,
    indistinguishable, simulate_game, tr_error_exponent, ExponentResult, GameConfig, GameMode,
    GameOutcome,
};
pub use pmf::{empirical_type, validate_pmf, Cdf, Pmf, Sequence};
pub use secmargin::{
    hoeffding_coupling, mallows_decomposition, security_margin, security_margin_linf,
    sm_continuous, sm_same_class, sm_upper_bound, MomentStats, SecurityMarginReport,
};
pub use transport::{
    emd, emd_l1_closed_form, emd_with_map, enumerate_integer_plans, is_monge, linf_cost, map_cost,
    min_cost_flow_emd, nwc_map, sm_uniform_closed_form, TransportMap,
};

/// Errors produced by any operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two distributions that must share an alphabet do not.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// A probability vector violates nonnegativity or normalization.
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    /// Any other invalid argument (bad exponent, malformed file, symbol out
    /// of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The instance exceeds a guard bound meant for desk-scale problems.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// There is no admissible point at all for the requested constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An iterative solver stopped at the iteration cap before reaching the
    /// requested certificate.
    #[error("solver did not converge: gap {gap:.3e} after {iterations} iterations")]
    NoConvergence { gap: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
