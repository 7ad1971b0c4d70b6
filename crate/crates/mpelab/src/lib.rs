//! mpelab — a laboratory for the multiplicative Poisson equation on finite
//! Markov chains.
//!
//! The central object is the equation
//!
//! ```text
//! w(x) = g(x) - lambda + ln sum_y e^{w(y)} P(x, y)
//! ```
//!
//! for a row-stochastic kernel `P` and bounded reward `g`: the multiplicative
//! (risk-sensitive) analogue of the additive Poisson equation of average-cost
//! Markov decision theory. Unlike its additive cousin it can fail to have
//! bounded solutions even on nice chains, and the failure is governed by a
//! sharp quantitative threshold: solutions exist for every reward with span
//! seminorm below `-ln sqrt(Lambda)`, where `Lambda` is the chain's one-step
//! mixing (Dobrushin) coefficient, and this constant cannot be improved.
//!
//! The crate provides, module by module:
//!
//! * [`kernel`] — validated finite kernels, state spaces with optional
//!   metrics, total-variation geometry, communicating classes, invariant
//!   measures, and taboo (first-passage) probabilities;
//! * [`mixing`] — Dobrushin coefficients, minorization constants, and
//!   strong mixing ratios, with the inequalities between them checked
//!   numerically;
//! * [`entropy`] — the entropic utility `ln E e^f`, its variational duality
//!   with relative entropy, and the exponential tilting that attains it;
//! * [`mpe`] — the span-seminorm fixed-point solver, the sharp existence
//!   bound and its multi-step refinement, the additive comparison solver,
//!   empirical contraction estimates, and a combinatorial classifier for
//!   "solutions for every reward";
//! * [`ergodic`] — finite-horizon risk-sensitive averages, their `1/n`
//!   convergence envelope, geometric escape tests, and exact visit-count
//!   laws;
//! * [`simulate`] — reproducible path sampling, Monte Carlo estimates with
//!   bootstrap error bars, exact lattice partial-sum laws, and stochastic
//!   dominance;
//! * [`corpus`] — benchmark chains (absorbing two-state, cyclic, shift,
//!   branching, locally geometric families) with explicit truncation
//!   records and closed forms to test against;
//! * [`io`] — JSON/CSV interchange for kernels and rewards.

pub mod corpus;
pub mod entropy;
pub mod ergodic;
pub mod error;
pub mod io;
pub mod kernel;
pub mod mixing;
pub mod mpe;
pub mod simulate;

pub use entropy::{
    dual_gap, entropic_utility, entropic_utility_gamma, esscher_measure, relative_entropy,
    rescale_risk, RewardFunction,
};
pub use ergodic::{
    average_trace, escape_geometric_test, lambda_convergence_check, risk_sensitive_average,
    visit_count_tail, AverageTrace, ConvergenceCheck, EscapeOutcome, EscapeReport,
};
pub use error::{Error, Result};
pub use kernel::{
    communicating_classes, hahn_decomposition, invariant_measure, taboo_tail, total_variation,
    CommunicatingClass, Distribution, FiniteKernel, HahnDecomposition, Metric, StateSpace,
    SupportPattern,
};
pub use mixing::{
    check_relations, dobrushin_coefficient, minorization, mixing_report, strong_mixing_ratio,
    MinorizationEntry, MixingRelations, MixingReport,
};
pub use mpe::{
    apply_t, finite_existence_classifier, guaranteed_existence, local_contraction_estimate,
    sharp_bound, sharp_bound_minorization, solve_ape, solve_mpe, span_seminorm, verify_mpe,
    ApeSolution, Classification, ExistenceVerdict, MpeSolution, SolveOptions, SolveStatus,
};
pub use simulate::{
    mc_entropic_estimate, partial_sum_distribution, sample_paths, stochastic_dominance,
    Dominance, LatticeDistribution, McEstimate, PathBatch, Substream, RNG_ALGORITHM,
};
