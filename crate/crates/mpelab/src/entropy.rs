//! Entropic (exponential) utilities, Esscher tilts, relative entropy, and
//! the dual representation gap.
//!
//! The central quantity is the one-step entropic utility
//! `mu_x(f) = ln sum_y e^{f(y)} P(x, y)`, evaluated with a log-sum-exp that
//! shifts by the maximum of `f` *restricted to the support of the row*.
//! Restricting the shift matters: a global maximum attained outside the row's
//! support would push every supported term to `e^{-inf}` and produce
//! `ln 0 = -inf` (or NaN downstream) on rows that cannot reach the maximizing
//! state — absorbing rows being the canonical casualty.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Distribution, FiniteKernel};

/// A finite reward (cost) function on a state space, stored as one value per
/// state in state order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardFunction {
    values: Vec<f64>,
}

impl RewardFunction {
    /// Validate that every value is finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadParameters(
                "reward function must have at least one state".into(),
            ));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::BadParameters(format!(
                    "reward value at state index {i} is not finite: {v}"
                )));
            }
        }
        Ok(Self { values })
    }

    /// The constant reward `c` on `n` states.
    pub fn constant(c: f64, n: usize) -> Result<Self> {
        Self::new(vec![c; n])
    }

    /// Values in state order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true for a validated reward.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One-step entropic utility `mu_x(f) = ln sum_y e^{f(y)} P(x, y)`.
///
/// Stabilized by shifting with the maximum of `f` over the support of row
/// `x`, so rows with restricted support are immune to overflow and to the
/// spurious `-inf` a global shift would cause.
pub fn entropic_utility(kernel: &FiniteKernel, x: usize, f: &[f64]) -> Result<f64> {
    let n = kernel.n();
    if x >= n {
        return Err(Error::BadState { index: x, n });
    }
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: n,
        });
    }
    let row = kernel.row(x);
    let mut peak = f64::NEG_INFINITY;
    for (y, &p) in row.iter().enumerate() {
        if p > 0.0 {
            peak = peak.max(f[y]);
        }
    }
    let sum: f64 = row
        .iter()
        .zip(f)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &v)| p * (v - peak).exp())
        .sum();
    Ok(peak + sum.ln())
}

/// The Esscher (exponential tilt) measure of row `x` by `f`:
/// `dQ/dP(x, .) proportional to e^{f(.)}` on the support of the row.
pub fn esscher_measure(kernel: &FiniteKernel, x: usize, f: &[f64]) -> Result<Distribution> {
    let n = kernel.n();
    if x >= n {
        return Err(Error::BadState { index: x, n });
    }
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: n,
        });
    }
    let row = kernel.row(x);
    let mut peak = f64::NEG_INFINITY;
    for (y, &p) in row.iter().enumerate() {
        if p > 0.0 {
            peak = peak.max(f[y]);
        }
    }
    let weights: Vec<f64> = row
        .iter()
        .zip(f)
        .map(|(&p, &v)| if p > 0.0 { p * (v - peak).exp() } else { 0.0 })
        .collect();
    let total: f64 = weights.iter().sum();
    Distribution::new(weights.into_iter().map(|w| w / total).collect())
}

/// Relative entropy `H[nu || mu] = sum_i nu_i ln(nu_i / mu_i)`, with the
/// conventions `0 ln(0/q) = 0` and `H = +inf` as soon as `nu` is not
/// absolutely continuous with respect to `mu`.
pub fn relative_entropy(nu: &Distribution, mu: &Distribution) -> Result<f64> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            left: nu.len(),
            right: mu.len(),
        });
    }
    let mut h = 0.0;
    for (&p, &q) in nu.weights().iter().zip(mu.weights()) {
        if p > 0.0 {
            if q <= 0.0 {
                return Ok(f64::INFINITY);
            }
            h += p * (p / q).ln();
        }
    }
    Ok(h.max(0.0))
}

/// Gap of the dual (variational) representation at candidate measure `mu`:
///
/// `gap = mu_x(f) - [ sum f dmu - H(mu || P(x, .)) ]`.
///
/// The representation states `mu_x(f) = sup_mu [ sum f dmu - H(mu || P(x,.)) ]`,
/// so the gap is nonnegative for every `mu` (up to roundoff; callers should
/// allow `-1e-10`) and zero exactly at the Esscher measure. When `mu` is not
/// absolutely continuous with respect to the row, the gap is `+inf`.
pub fn dual_gap(kernel: &FiniteKernel, x: usize, f: &[f64], mu: &Distribution) -> Result<f64> {
    let n = kernel.n();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            left: mu.len(),
            right: n,
        });
    }
    let utility = entropic_utility(kernel, x, f)?;
    let row = Distribution::new(kernel.row(x).to_vec())?;
    let entropy = relative_entropy(mu, &row)?;
    if entropy.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mean = mu.expect(f)?;
    Ok(utility - (mean - entropy))
}

/// Rescale a reward by a nonzero risk-sensitivity parameter: `f -> gamma f`.
///
/// Together with [`entropic_utility_gamma`] this realizes the identity
/// `mu^gamma_x(f) = gamma^{-1} mu_x(gamma f)` relating the gamma-risk
/// utility to the standard one.
pub fn rescale_risk(f: &RewardFunction, gamma: f64) -> Result<RewardFunction> {
    if gamma == 0.0 {
        return Err(Error::ZeroGamma);
    }
    if !gamma.is_finite() {
        return Err(Error::DomainError {
            value: gamma,
            domain: "finite nonzero gamma",
        });
    }
    RewardFunction::new(f.values().iter().map(|&v| gamma * v).collect())
}

/// Entropic utility at risk sensitivity `gamma`:
/// `mu^gamma_x(f) = gamma^{-1} ln sum_y e^{gamma f(y)} P(x, y)`,
/// evaluated directly with its own support-restricted stabilization.
pub fn entropic_utility_gamma(
    kernel: &FiniteKernel,
    x: usize,
    f: &[f64],
    gamma: f64,
) -> Result<f64> {
    if gamma == 0.0 {
        return Err(Error::ZeroGamma);
    }
    let n = kernel.n();
    if x >= n {
        return Err(Error::BadState { index: x, n });
    }
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: n,
        });
    }
    let row = kernel.row(x);
    let mut peak = f64::NEG_INFINITY;
    for (y, &p) in row.iter().enumerate() {
        if p > 0.0 {
            peak = peak.max(gamma * f[y]);
        }
    }
    let sum: f64 = row
        .iter()
        .zip(f)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &v)| p * (gamma * v - peak).exp())
        .sum();
    Ok((peak + sum.ln()) / gamma)
}
