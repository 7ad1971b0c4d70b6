//! Ergodic-average diagnostics for the multiplicative Poisson equation.
//!
//! When the MPE has a bounded solution `(lambda, w)`, the finite-horizon
//! risk-sensitive averages `T^n 0(x) / n` converge to `lambda` at rate
//! `2 ||w||_sp / n`, uniformly in the start state. This module computes those
//! averages, checks the convergence envelope, measures how fast mass escapes
//! the complement of a distinguished support set, and computes exact
//! visit-count laws by dynamic programming.

use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use serde::Serialize;
use crate::mpe::{apply_t, solve_mpe, span_seminorm, SolveOptions, SolveStatus};

/// Finite-horizon risk-sensitive average `T^n 0(x) / n`.
///
/// This equals `(1/n) ln E_x[e^{S_n}]` where `S_n = g(x_0) + ... + g(x_{n-1})`
/// is the `n`-step partial sum starting at `x_0 = x`.
pub fn risk_sensitive_average(
    kernel: &FiniteKernel,
    g: &[f64],
    start: usize,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadParameters("horizon n must be at least 1".into()));
    }
    let trace = average_trace(kernel, g, start, n)?;
    Ok(*trace.values.last().expect("n >= 1"))
}

/// The sequence of finite-horizon averages from one start state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageTrace {
    /// Start state index.
    pub start: usize,
    /// `values[k] = T^{k+1} 0(start) / (k + 1)` for `k + 1 = 1..=n_max`.
    pub values: Vec<f64>,
}

/// Compute `T^n 0(start) / n` for every `n = 1..=n_max` in one sweep.
pub fn average_trace(
    kernel: &FiniteKernel,
    g: &[f64],
    start: usize,
    n_max: usize,
) -> Result<AverageTrace> {
    let dim = kernel.n();
    if start >= dim {
        return Err(Error::BadState {
            index: start,
            n: dim,
        });
    }
    if n_max == 0 {
        return Err(Error::BadParameters("n_max must be at least 1".into()));
    }
    let mut f = vec![0.0; dim];
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        f = apply_t(kernel, g, &f)?;
        values.push(f[start] / n as f64);
    }
    Ok(AverageTrace { start, values })
}

/// Result of [`lambda_convergence_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCheck {
    /// Eigenvalue from the MPE solve.
    pub lambda: f64,
    /// Span seminorm of the solution `w`.
    pub w_span: f64,
    /// Largest value of `|T^n 0(start)/n - lambda| - 2 ||w||_sp / n` over
    /// `n <= n_max`. Non-positive (up to round-off) whenever the solution is
    /// genuine.
    pub max_excess: f64,
}

/// Solve the MPE and test the convergence envelope
/// `|T^n 0(x)/n - lambda| <= 2 ||w||_sp / n` for all `n <= n_max`.
///
/// Fails with `ConvergenceFailure` when the solver itself does not reach a
/// solution, since the envelope is then meaningless.
pub fn lambda_convergence_check(
    kernel: &FiniteKernel,
    g: &[f64],
    start: usize,
    n_max: usize,
    opts: &SolveOptions,
) -> Result<ConvergenceCheck> {
    let sol = solve_mpe(kernel, g, opts)?;
    if sol.status != SolveStatus::Solved {
        return Err(Error::ConvergenceFailure {
            what: "MPE solve inside the convergence check",
            residual: sol.trace.last().copied().unwrap_or(f64::NAN),
        });
    }
    let w_span = span_seminorm(&sol.w);
    let trace = average_trace(kernel, g, start, n_max)?;
    let mut max_excess = f64::NEG_INFINITY;
    for (k, &avg) in trace.values.iter().enumerate() {
        let n = (k + 1) as f64;
        let excess = (avg - sol.lambda).abs() - 2.0 * w_span / n;
        max_excess = max_excess.max(excess);
    }
    Ok(ConvergenceCheck {
        lambda: sol.lambda,
        w_span,
        max_excess,
    })
}

/// Per-rate outcome of the escape test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EscapeOutcome {
    /// `n` is the smallest horizon with
    /// `sup_{x notin S} P_x[tau_S > n] <= alpha^n`.
    PassedAt(usize),
    /// No horizon up to `n_max` satisfies the geometric envelope.
    Failed,
}

/// Result of [`escape_geometric_test`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeReport {
    /// The tested rates, in the order given.
    pub alphas: Vec<f64>,
    /// Outcome for each rate.
    pub outcomes: Vec<EscapeOutcome>,
    /// True when the complement of the support set is empty, making every
    /// rate pass vacuously at horizon 1.
    pub vacuous: bool,
}

/// Test whether first entry into `support` happens at a geometric rate from
/// *every* state outside it: for each `alpha`, find the smallest
/// `n <= n_max` with `sup_{x notin support} P_x[tau_support > n] <= alpha^n`.
pub fn escape_geometric_test(
    kernel: &FiniteKernel,
    support: &[usize],
    alphas: &[f64],
    n_max: usize,
) -> Result<EscapeReport> {
    let dim = kernel.n();
    if support.is_empty() {
        return Err(Error::EmptyTaboo);
    }
    for &s in support {
        if s >= dim {
            return Err(Error::BadState { index: s, n: dim });
        }
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::DomainError {
                value: alpha,
                domain: "(0, 1)",
            });
        }
    }
    if n_max == 0 {
        return Err(Error::BadParameters("n_max must be at least 1".into()));
    }

    let mut inside = vec![false; dim];
    for &s in support {
        inside[s] = true;
    }
    let complement: Vec<usize> = (0..dim).filter(|&x| !inside[x]).collect();
    if complement.is_empty() {
        return Ok(EscapeReport {
            alphas: alphas.to_vec(),
            outcomes: vec![EscapeOutcome::PassedAt(1); alphas.len()],
            vacuous: true,
        });
    }

    // v_n(x) = P_x[tau_support > n] for x in the complement, computed by the
    // backward recursion v_n = (P restricted to the complement) v_{n-1}.
    let mut v: Vec<f64> = vec![1.0; dim];
    let mut outcomes: Vec<Option<EscapeOutcome>> = vec![None; alphas.len()];
    let mut unresolved = alphas.len();
    for n in 1..=n_max {
        let mut next = vec![0.0; dim];
        for &x in &complement {
            let mut acc = 0.0;
            for (y, &p) in kernel.row(x).iter().enumerate() {
                if p > 0.0 && !inside[y] {
                    acc += p * v[y];
                }
            }
            next[x] = acc;
        }
        v = next;
        let sup_tail = complement.iter().map(|&x| v[x]).fold(0.0f64, f64::max);
        for (slot, &alpha) in outcomes.iter_mut().zip(alphas) {
            if slot.is_none() && sup_tail <= alpha.powi(n as i32) {
                *slot = Some(EscapeOutcome::PassedAt(n));
                unresolved -= 1;
            }
        }
        if unresolved == 0 {
            break;
        }
    }
    Ok(EscapeReport {
        alphas: alphas.to_vec(),
        outcomes: outcomes
            .into_iter()
            .map(|o| o.unwrap_or(EscapeOutcome::Failed))
            .collect(),
        vacuous: false,
    })
}

/// Exact law of the visit count `N = #{1 <= t <= n : x_t in targets}` from a
/// given start state, as a vector `p` with `p[k] = P[N = k]`.
///
/// The start state itself (time 0) is not counted. Horizons are capped at
/// 1000; the joint dynamic program over (state, count) is exact but
/// quadratic in the horizon.
pub fn visit_count_tail(
    kernel: &FiniteKernel,
    start: usize,
    targets: &[usize],
    n: usize,
) -> Result<Vec<f64>> {
    let dim = kernel.n();
    if start >= dim {
        return Err(Error::BadState {
            index: start,
            n: dim,
        });
    }
    for &t in targets {
        if t >= dim {
            return Err(Error::BadState { index: t, n: dim });
        }
    }
    if n > 1000 {
        return Err(Error::BadParameters(format!(
            "visit-count horizon capped at 1000, got {n}"
        )));
    }
    let mut in_target = vec![false; dim];
    for &t in targets {
        in_target[t] = true;
    }

    // joint[x][c] = P[x_t = x, N_t = c]; counts after t steps are <= t.
    let mut joint = vec![vec![0.0f64; n + 1]; dim];
    joint[start][0] = 1.0;
    for t in 1..=n {
        let mut next = vec![vec![0.0f64; n + 1]; dim];
        for x in 0..dim {
            for c in 0..t {
                let mass = joint[x][c];
                if mass == 0.0 {
                    continue;
                }
                for (y, &p) in kernel.row(x).iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let bump = usize::from(in_target[y]);
                    next[y][c + bump] += mass * p;
                }
            }
        }
        joint = next;
    }
    let mut law = vec![0.0f64; n + 1];
    for row in &joint {
        for (c, &mass) in row.iter().enumerate() {
            law[c] += mass;
        }
    }
    Ok(law)
}
