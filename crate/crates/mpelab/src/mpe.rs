//! The multiplicative Poisson equation (MPE) and its span-seminorm solver.
//!
//! The equation asks for a constant `lambda` and a function `w`, defined up
//! to an additive constant, with
//!
//! ```text
//! w(x) = g(x) - lambda + mu_x(w),        mu_x(w) = ln sum_y e^{w(y)} P(x, y).
//! ```
//!
//! The solver iterates the operator `T f = g + mu_.(f)`, re-centering each
//! iterate by its minimum, and watches the span seminorm
//! `||f||_sp = (max f - min f) / 2`: convergence of the re-centered iterates
//! yields a solution, while unbounded span growth is reported as divergence.
//! The module also provides the sharp existence bound `k(Lambda) = -ln(sqrt
//! Lambda)` with its multi-step refinement, the additive (risk-neutral)
//! comparison solver, a Monte Carlo estimate of the local span-contraction
//! factor, and a combinatorial classifier deciding whether bounded solutions
//! exist for *every* reward on a given finite kernel.

use serde::Serialize;

use crate::entropy::{entropic_utility, RewardFunction};
use crate::error::{Error, Result};
use crate::kernel::{communicating_classes, invariant_measure, FiniteKernel};
use crate::mixing::dobrushin_coefficient;
use crate::simulate::Substream;

/// Span seminorm `(max f - min f) / 2`; zero for constants and empty input.
pub fn span_seminorm(f: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in f {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return 0.0;
    }
    0.5 * (hi - lo)
}

/// One application of the MPE operator: `(T f)(x) = g(x) + mu_x(f)`.
pub fn apply_t(kernel: &FiniteKernel, g: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    let n = kernel.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: n,
        });
    }
    (0..n)
        .map(|x| Ok(g[x] + entropic_utility(kernel, x, f)?))
        .collect()
}

/// Options for [`solve_mpe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Convergence tolerance on the span of successive differences.
    pub tol: f64,
    /// Iteration budget before returning `Inconclusive`.
    pub max_iter: usize,
    /// Span threshold for the `Diverged` verdict.
    pub span_cap: f64,
    /// When set, the returned `w` is normalized to vanish at this state
    /// instead of at its minimum.
    pub anchor: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            span_cap: 1e4,
            anchor: None,
        }
    }
}

/// Outcome of the fixed-point iteration.
///
/// `Inconclusive` is deliberately distinct from `Diverged`: the sharp bound
/// behind the solver is sufficient-only, so exhausting the iteration budget
/// proves nothing about existence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    /// Successive iterates converged in span.
    Solved,
    /// The iterate span exceeded `span_cap`.
    Diverged,
    /// The iteration budget ran out first.
    Inconclusive,
}

/// Result of [`solve_mpe`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpeSolution {
    /// Candidate solution, normalized to `inf w = 0` (or `w(anchor) = 0`).
    /// Meaningful as a solution only when `status == Solved`; otherwise it is
    /// the last iterate, reported for diagnostics.
    pub w: Vec<f64>,
    /// Candidate eigenvalue: the mean of `T f - f` at termination. The
    /// spread of `T f - f` around this mean is folded into `residual`.
    pub lambda: f64,
    /// Equation defect `max_x |w(x) - g(x) + lambda - mu_x(w)|`.
    pub residual: f64,
    /// Termination verdict.
    pub status: SolveStatus,
    /// Span seminorm of each iterate, in order.
    pub trace: Vec<f64>,
}

impl MpeSolution {
    /// Number of iterations performed.
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

/// Solve the MPE by re-centered fixed-point iteration from `f_0 = 0`:
/// `f_{n+1} = T f_n - inf(T f_n)`.
///
/// Verdicts: `Solved` when `||f_{n+1} - f_n||_sp < tol` (with `lambda` the
/// mean of `T f_n - f_n`), `Diverged` as soon as the iterate span exceeds
/// `span_cap`, `Inconclusive` when `max_iter` runs out.
pub fn solve_mpe(kernel: &FiniteKernel, g: &[f64], opts: &SolveOptions) -> Result<MpeSolution> {
    let n = kernel.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: n,
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::BadParameters(format!(
            "tol must be positive, got {}",
            opts.tol
        )));
    }
    if !(opts.span_cap > 1.0) {
        return Err(Error::BadParameters(format!(
            "span_cap must exceed 1, got {}",
            opts.span_cap
        )));
    }
    if opts.max_iter == 0 {
        return Err(Error::BadParameters("max_iter must be at least 1".into()));
    }
    if let Some(a) = opts.anchor {
        if a >= n {
            return Err(Error::BadState { index: a, n });
        }
    }

    let finish = |f: &[f64], diff: &[f64], status: SolveStatus, trace: Vec<f64>| {
        let lambda = diff.iter().sum::<f64>() / n as f64;
        let mut w = f.to_vec();
        let shift = match opts.anchor {
            Some(a) => w[a],
            None => w.iter().cloned().fold(f64::INFINITY, f64::min),
        };
        for v in &mut w {
            *v -= shift;
        }
        let residual = verify_mpe(kernel, g, &w, lambda)?;
        Ok(MpeSolution {
            w,
            lambda,
            residual,
            status,
            trace,
        })
    };

    let mut f = vec![0.0; n];
    let mut trace = Vec::new();
    for _ in 0..opts.max_iter {
        let tf = apply_t(kernel, g, &f)?;
        let diff: Vec<f64> = tf.iter().zip(&f).map(|(&a, &b)| a - b).collect();
        let floor = tf.iter().cloned().fold(f64::INFINITY, f64::min);
        let next: Vec<f64> = tf.iter().map(|&v| v - floor).collect();
        let span = span_seminorm(&next);
        trace.push(span);
        if span > opts.span_cap {
            return finish(&next, &diff, SolveStatus::Diverged, trace);
        }
        if span_seminorm(&diff) < opts.tol {
            return finish(&next, &diff, SolveStatus::Solved, trace);
        }
        f = next;
    }
    let tf = apply_t(kernel, g, &f)?;
    let diff: Vec<f64> = tf.iter().zip(&f).map(|(&a, &b)| a - b).collect();
    finish(&f, &diff, SolveStatus::Inconclusive, trace)
}

/// Equation defect `max_x |w(x) - g(x) + lambda - mu_x(w)|` of a candidate
/// solution pair.
pub fn verify_mpe(kernel: &FiniteKernel, g: &[f64], w: &[f64], lambda: f64) -> Result<f64> {
    let n = kernel.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: n,
        });
    }
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            left: w.len(),
            right: n,
        });
    }
    let mut worst = 0.0f64;
    for x in 0..n {
        let defect = w[x] - g[x] + lambda - entropic_utility(kernel, x, w)?;
        worst = worst.max(defect.abs());
    }
    Ok(worst)
}

/// The sharp existence threshold `k(Lambda) = -(1/2) ln Lambda` for the
/// one-step mixing coefficient `Lambda` in `(0, 1)`: a bounded MPE solution
/// exists for every kernel with coefficient `Lambda` and every reward with
/// `||g||_sp < k(Lambda)`, and the constant is sharp.
pub fn sharp_bound(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::DomainError {
            value: lambda,
            domain: "(0, 1)",
        });
    }
    Ok(-0.5 * lambda.ln())
}

/// The same threshold expressed through a minorization mass `d` in `(0, 1)`:
/// `k(1 - d) = -(1/2) ln(1 - d)`.
pub fn sharp_bound_minorization(d: f64) -> Result<f64> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::DomainError {
            value: d,
            domain: "(0, 1)",
        });
    }
    Ok(-0.5 * (1.0 - d).ln())
}

/// Verdict of [`guaranteed_existence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExistenceVerdict {
    /// The `n`-step sharp bound certifies existence.
    GuaranteedByBound(usize),
    /// No step count up to `n_max` certifies existence. This is *not* a
    /// non-existence claim.
    NoGuarantee,
}

/// Look for the smallest `n <= n_max` whose multi-step sharp bound
/// `n ||g||_sp < k(Lambda_n)` certifies a bounded solution.
///
/// The multi-step rule is a conservative extension of the one-step theorem:
/// `n` elementary steps aggregate at most `n ||g||_sp` of reward span against
/// the `n`-step coefficient. Constant rewards are certified immediately, and
/// `Lambda_n = 0` certifies any reward (the threshold is `+inf` there).
pub fn guaranteed_existence(
    kernel: &FiniteKernel,
    g: &[f64],
    n_max: usize,
) -> Result<ExistenceVerdict> {
    if n_max == 0 {
        return Err(Error::BadParameters("n_max must be at least 1".into()));
    }
    if g.len() != kernel.n() {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: kernel.n(),
        });
    }
    let span = span_seminorm(g);
    if span == 0.0 {
        return Ok(ExistenceVerdict::GuaranteedByBound(1));
    }
    for n in 1..=n_max {
        let lambda_n = dobrushin_coefficient(kernel, n)?;
        if lambda_n <= 0.0 {
            return Ok(ExistenceVerdict::GuaranteedByBound(n));
        }
        if lambda_n >= 1.0 {
            continue;
        }
        if (n as f64) * span < sharp_bound(lambda_n)? {
            return Ok(ExistenceVerdict::GuaranteedByBound(n));
        }
    }
    Ok(ExistenceVerdict::NoGuarantee)
}

/// Result of the additive (risk-neutral) Poisson solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApeSolution {
    /// Relative value function, normalized to `inf w0 = 0`.
    pub w0: Vec<f64>,
    /// Long-run mean reward `nu(g)` under the invariant measure.
    pub lambda0: f64,
    /// Defect `max_x |w0(x) - g(x) + lambda0 - (P w0)(x)|`.
    pub residual: f64,
}

/// Solve the additive Poisson equation `w0 = g - lambda0 + P w0` with
/// `lambda0 = nu(g)`, by grounding one state of the invariant support and
/// solving the remaining linear system directly.
///
/// Unlike the multiplicative equation this always has a solution when the
/// invariant measure is unique, which is exactly the structural contrast the
/// rest of the crate explores.
pub fn solve_ape(
    kernel: &FiniteKernel,
    g: &[f64],
    anchor: Option<usize>,
) -> Result<ApeSolution> {
    let n = kernel.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: n,
        });
    }
    let nu = invariant_measure(kernel)?;
    let lambda0 = nu.expect(g)?;

    let anchor = match anchor {
        Some(a) => {
            if a >= n {
                return Err(Error::BadState { index: a, n });
            }
            if nu.weights()[a] <= 0.0 {
                return Err(Error::BadParameters(format!(
                    "anchor state index {a} lies outside the invariant support"
                )));
            }
            a
        }
        None => {
            // Ground the heaviest invariant state.
            let mut best = 0;
            for (i, &w) in nu.weights().iter().enumerate() {
                if w > nu.weights()[best] {
                    best = i;
                }
            }
            best
        }
    };

    let mut w = vec![0.0; n];
    if n > 1 {
        // Unknowns are w at the non-anchor states; w(anchor) = 0.
        let others: Vec<usize> = (0..n).filter(|&i| i != anchor).collect();
        let m = others.len();
        let mut a = nalgebra::DMatrix::<f64>::zeros(m, m);
        let mut b = nalgebra::DVector::<f64>::zeros(m);
        for (r, &i) in others.iter().enumerate() {
            for (c, &j) in others.iter().enumerate() {
                a[(r, c)] = if r == c { 1.0 } else { 0.0 } - kernel.entry(i, j);
            }
            b[r] = g[i] - lambda0;
        }
        let solution = a.lu().solve(&b).ok_or(Error::ConvergenceFailure {
            what: "additive Poisson linear solve",
            residual: f64::NAN,
        })?;
        for (r, &i) in others.iter().enumerate() {
            w[i] = solution[r];
        }
    }

    let floor = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let w0: Vec<f64> = w.iter().map(|&v| v - floor).collect();
    let image = kernel.right_apply(&w0);
    let mut residual = 0.0f64;
    for x in 0..n {
        residual = residual.max((w0[x] - g[x] + lambda0 - image[x]).abs());
    }
    if residual >= 1e-10 {
        return Err(Error::ConvergenceFailure {
            what: "additive Poisson equation",
            residual,
        });
    }
    Ok(ApeSolution {
        w0,
        lambda0,
        residual,
    })
}

/// Empirical local contraction factor of `T` in the span seminorm.
///
/// Draws `samples` pairs `(f1, f2)` with entries i.i.d. uniform on `[0, M)`
/// — so every difference of entries lies in `(-M, M)`, the regime in which
/// the local contraction factor is meaningful — and returns the largest
/// observed ratio `||T f1 - T f2||_sp / ||f1 - f2||_sp`. Pairs with
/// `||f1 - f2||_sp < 1e-12` (equal up to a constant) are skipped. When the
/// one-step mixing coefficient is strictly below one the estimate must stay
/// below one; a violation is reported as an error.
pub fn local_contraction_estimate(
    kernel: &FiniteKernel,
    g: &[f64],
    m_bound: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !(m_bound > 0.0) {
        return Err(Error::DomainError {
            value: m_bound,
            domain: "M > 0",
        });
    }
    if samples == 0 {
        return Err(Error::BadParameters("samples must be at least 1".into()));
    }
    let n = kernel.n();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: n,
        });
    }
    let mut worst = 0.0f64;
    for pair in 0..samples {
        let mut s1 = Substream::new(seed, 2 * pair as u64);
        let mut s2 = Substream::new(seed, 2 * pair as u64 + 1);
        let f1: Vec<f64> = (0..n).map(|_| m_bound * s1.next_f64()).collect();
        let f2: Vec<f64> = (0..n).map(|_| m_bound * s2.next_f64()).collect();
        let gap: Vec<f64> = f1.iter().zip(&f2).map(|(&a, &b)| a - b).collect();
        let denominator = span_seminorm(&gap);
        if denominator < 1e-12 {
            continue;
        }
        let t1 = apply_t(kernel, g, &f1)?;
        let t2 = apply_t(kernel, g, &f2)?;
        let tgap: Vec<f64> = t1.iter().zip(&t2).map(|(&a, &b)| a - b).collect();
        worst = worst.max(span_seminorm(&tgap) / denominator);
    }
    let lambda1 = dobrushin_coefficient(kernel, 1)?;
    if lambda1 <= 1.0 - 1e-9 && worst >= 1.0 {
        return Err(Error::ConvergenceFailure {
            what: "local contraction estimate",
            residual: worst,
        });
    }
    Ok(worst)
}

/// Verdict of [`finite_existence_classifier`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Classification {
    /// Bounded MPE solutions exist for every reward on this kernel.
    AllG,
    /// Some reward admits no bounded solution; `witness` is one such reward.
    NotAllG {
        /// Reward supported on a transient cycle, at level `2 (ln 2 - ln h)`
        /// where `h` is the cycle's geometric stay rate.
        witness: RewardFunction,
    },
    /// The combinatorial tests are inconclusive (e.g. the recurrent class is
    /// periodic).
    Unknown,
}

/// Decide, for a finite kernel with a unique invariant measure, whether the
/// MPE has a bounded solution for *every* reward.
///
/// The decision is combinatorial:
///
/// * a cycle (or self-loop) among transient states lets mass linger outside
///   the invariant support at a geometric rate `h`; the reward equal to
///   `2 (ln 2 - ln h)` on that cycle then defeats every bounded solution,
///   so the verdict is `NotAllG` with that witness;
/// * otherwise, if some power `n <= |R|` of the kernel restricted to the
///   recurrent class `R` has an identical support in every row (a finite
///   strong-mixing condition), the verdict is `AllG`;
/// * anything else (in particular a periodic recurrent class) is `Unknown`.
pub fn finite_existence_classifier(kernel: &FiniteKernel) -> Result<Classification> {
    let n = kernel.n();
    let classes = communicating_classes(kernel);
    let recurrent: Vec<_> = classes.iter().filter(|c| c.recurrent).collect();
    if recurrent.len() != 1 {
        return Err(Error::NonUniqueInvariant {
            classes: recurrent.len(),
        });
    }
    let recurrent_states = &recurrent[0].states;
    let mut is_recurrent = vec![false; n];
    for &i in recurrent_states {
        is_recurrent[i] = true;
    }

    // Look for a cycle among transient states: first any self-loop, then any
    // strongly connected component of size >= 2 in the transient subgraph.
    if let Some(cycle) = transient_cycle(kernel, &is_recurrent) {
        let rate = cycle_stay_rate(kernel, &cycle);
        let level = 2.0 * (2.0f64.ln() - rate.ln());
        let mut values = vec![0.0; n];
        for &i in &cycle {
            values[i] = level;
        }
        return Ok(Classification::NotAllG {
            witness: RewardFunction::new(values)?,
        });
    }

    // Transient part is acyclic; test the restricted kernel for a power with
    // uniform row support.
    let restricted = restrict(kernel, recurrent_states)?;
    for step in 1..=recurrent_states.len() {
        if restricted.support_power(step)?.rows_all_equal() {
            return Ok(Classification::AllG);
        }
    }
    Ok(Classification::Unknown)
}

/// A cycle among transient states, as a list of states in cycle order, or
/// `None` when the transient subgraph is acyclic (self-loops included).
fn transient_cycle(kernel: &FiniteKernel, is_recurrent: &[bool]) -> Option<Vec<usize>> {
    let n = kernel.n();
    for i in 0..n {
        if !is_recurrent[i] && kernel.entry(i, i) > 0.0 {
            return Some(vec![i]);
        }
    }
    // Iterative three-color DFS over the transient subgraph to find a cycle.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if is_recurrent[i] {
                Vec::new()
            } else {
                (0..n)
                    .filter(|&j| !is_recurrent[j] && kernel.entry(i, j) > 0.0)
                    .collect()
            }
        })
        .collect();
    let mut color = vec![WHITE; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if is_recurrent[start] || color[start] != WHITE {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        color[start] = GRAY;
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            if let Some(&next) = adjacency[node].get(*idx) {
                *idx += 1;
                match color[next] {
                    WHITE => {
                        color[next] = GRAY;
                        parent[next] = node;
                        stack.push((next, 0));
                    }
                    GRAY => {
                        // Found a back edge node -> next: unwind the cycle.
                        let mut cycle = vec![node];
                        let mut cursor = node;
                        while cursor != next {
                            cursor = parent[cursor];
                            cycle.push(cursor);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[node] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Geometric stay rate of a cycle: the geometric mean of its edge
/// probabilities (the per-step rate of completing loops forever).
fn cycle_stay_rate(kernel: &FiniteKernel, cycle: &[usize]) -> f64 {
    let len = cycle.len();
    let mut log_product = 0.0;
    for (pos, &i) in cycle.iter().enumerate() {
        let j = cycle[(pos + 1) % len];
        log_product += kernel.entry(i, j).ln();
    }
    (log_product / len as f64).exp()
}

/// Restrict a kernel to a closed set of states (rows renormalize exactly
/// because no mass leaves the set).
fn restrict(kernel: &FiniteKernel, states: &[usize]) -> Result<FiniteKernel> {
    let rows: Vec<Vec<f64>> = states
        .iter()
        .map(|&i| states.iter().map(|&j| kernel.entry(i, j)).collect())
        .collect();
    FiniteKernel::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_state(lambda: f64) -> FiniteKernel {
        FiniteKernel::from_rows(vec![vec![1.0, 0.0], vec![1.0 - lambda, lambda]]).unwrap()
    }

    fn cyclic() -> FiniteKernel {
        FiniteKernel::from_rows(vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_seminorm(&[3.0, 3.0, 3.0]), 0.0);
        let k = 1.7f64;
        assert_abs_diff_eq!(span_seminorm(&[0.0, k.ln()]), k.ln() / 2.0);
        assert_abs_diff_eq!(span_seminorm(&[-1.0, 0.0, 3.0]), 2.0);
    }

    #[test]
    fn span_translation_invariant() {
        let f = [0.3, -1.0, 2.5];
        let shifted: Vec<f64> = f.iter().map(|&v| v + 17.25).collect();
        assert_abs_diff_eq!(span_seminorm(&f), span_seminorm(&shifted), epsilon = 1e-12);
    }

    #[test]
    fn apply_t_basics() {
        let k = two_state(0.5);
        let g = [0.0, 1.9f64.ln()];
        // T 0 = g.
        let t0 = apply_t(&k, &g, &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(t0[0], g[0], epsilon = 1e-15);
        assert_abs_diff_eq!(t0[1], g[1], epsilon = 1e-15);
        // Translation covariance.
        let f = [0.2, -0.7];
        let tf = apply_t(&k, &g, &f).unwrap();
        let f_shift: Vec<f64> = f.iter().map(|&v| v + 3.0).collect();
        let tf_shift = apply_t(&k, &g, &f_shift).unwrap();
        for x in 0..2 {
            assert_abs_diff_eq!(tf_shift[x], tf[x] + 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn solver_converges_below_threshold() {
        let k = two_state(0.5);
        for kk in [0.5, 1.0, 1.9] {
            let g = [0.0, (kk as f64).ln()];
            let sol = solve_mpe(&k, &g, &SolveOptions::default()).unwrap();
            assert_eq!(sol.status, SolveStatus::Solved, "k={kk}");
            assert_abs_diff_eq!(sol.lambda, 0.0, epsilon = 1e-8);
            assert!(sol.residual < 1e-8);
            assert_eq!(sol.w.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
        }
    }

    #[test]
    fn solver_closed_form_difference() {
        // At k = 1.5 the fixed point satisfies e^{w(1) - w(2)} = 1/3.
        let k = two_state(0.5);
        let g = [0.0, 1.5f64.ln()];
        let sol = solve_mpe(&k, &g, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_abs_diff_eq!(sol.w[0] - sol.w[1], -(3.0f64.ln()), epsilon = 1e-8);
    }

    #[test]
    fn solver_diverges_above_threshold() {
        let k = two_state(0.5);
        let opts = SolveOptions {
            span_cap: 3.0,
            max_iter: 10_000,
            ..SolveOptions::default()
        };
        for kk in [2.0, 2.1, 4.0] {
            let g = [0.0, (kk as f64).ln()];
            let sol = solve_mpe(&k, &g, &opts).unwrap();
            assert_eq!(sol.status, SolveStatus::Diverged, "k={kk}");
            assert!(*sol.trace.last().unwrap() > 3.0);
        }
    }

    #[test]
    fn solver_constant_reward() {
        let sol = solve_mpe(&cyclic(), &[2.5, 2.5, 2.5], &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_abs_diff_eq!(sol.lambda, 2.5, epsilon = 1e-12);
        for &v in &sol.w {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn solver_anchor_normalization() {
        let k = cyclic();
        let g = [0.3, 0.0, -0.2];
        let opts = SolveOptions {
            anchor: Some(1),
            ..SolveOptions::default()
        };
        let sol = solve_mpe(&k, &g, &opts).unwrap();
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_eq!(sol.w[1], 0.0);
    }

    #[test]
    fn verify_detects_perturbation() {
        let k = two_state(0.5);
        let g = [0.0, 1.5f64.ln()];
        let sol = solve_mpe(&k, &g, &SolveOptions::default()).unwrap();
        let mut w = sol.w.clone();
        w[0] += 0.1;
        let residual = verify_mpe(&k, &g, &w, sol.lambda).unwrap();
        // The absorbing row cancels its own perturbation; the other row sees
        // it through an Esscher weight of 1/4, so the defect is near 0.025.
        assert!(residual > 0.01 && residual < 0.2, "residual {residual}");
    }

    #[test]
    fn sharp_bound_values() {
        assert_abs_diff_eq!(sharp_bound(0.5).unwrap(), 0.5 * 2.0f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            sharp_bound_minorization(0.75).unwrap(),
            2.0f64.ln(),
            epsilon = 1e-15
        );
        assert!(sharp_bound(0.0).is_err());
        assert!(sharp_bound(1.0).is_err());
        assert!(sharp_bound_minorization(1.0).is_err());
        // k(Lambda) -> 0 as Lambda -> 1.
        assert!(sharp_bound(1.0 - 1e-12).unwrap() < 1e-11);
    }

    #[test]
    fn guaranteed_existence_examples() {
        let k = two_state(0.5);
        let below = [0.0, 1.9f64.ln()];
        assert_eq!(
            guaranteed_existence(&k, &below, 4).unwrap(),
            ExistenceVerdict::GuaranteedByBound(1)
        );
        // Above the threshold no multi-step bound helps: Lambda_n = 2^{-n}
        // exactly while the accumulated span grows linearly.
        let above = [0.0, 2.1f64.ln()];
        assert_eq!(
            guaranteed_existence(&k, &above, 8).unwrap(),
            ExistenceVerdict::NoGuarantee
        );
        let constant = [7.0, 7.0];
        assert_eq!(
            guaranteed_existence(&k, &constant, 1).unwrap(),
            ExistenceVerdict::GuaranteedByBound(1)
        );
    }

    #[test]
    fn ape_closed_form() {
        // Absorbing two-state chain: nu = point mass at state 1, and
        // w0(1) - w0(2) = (g(1) - g(2)) / (1 - Lambda).
        let lambda = 0.5;
        let k = two_state(lambda);
        let g = [0.0, 4.0f64.ln()];
        let sol = solve_ape(&k, &g, None).unwrap();
        assert_abs_diff_eq!(sol.lambda0, 0.0, epsilon = 1e-14);
        assert!(sol.residual < 1e-10);
        let expected = (g[0] - g[1]) / (1.0 - lambda);
        assert_abs_diff_eq!(sol.w0[0] - sol.w0[1], expected, epsilon = 1e-10);
    }

    #[test]
    fn ape_cyclic_uniform() {
        let sol = solve_ape(&cyclic(), &[1.0, 0.0, 0.0], None).unwrap();
        assert_abs_diff_eq!(sol.lambda0, 1.0 / 3.0, epsilon = 1e-12);
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn ape_constant_reward() {
        let sol = solve_ape(&cyclic(), &[2.0, 2.0, 2.0], None).unwrap();
        assert_abs_diff_eq!(sol.lambda0, 2.0, epsilon = 1e-14);
        for &v in &sol.w0 {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn contraction_estimate_rank_one() {
        // Identical rows: T f is constant across states, so every ratio is 0.
        let k = FiniteKernel::from_rows(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        let alpha = local_contraction_estimate(&k, &[0.0, 0.0], 1.0, 500, 7).unwrap();
        assert!(alpha <= 1e-10, "alpha {alpha}");
    }

    #[test]
    fn contraction_estimate_two_state_bound() {
        let k = two_state(0.5);
        for m in [0.5, 1.0, 2.0] {
            let alpha = local_contraction_estimate(&k, &[0.0, 0.0], m, 2000, 11).unwrap();
            let bound = 1.0 / (1.0 + (-m as f64).exp());
            assert!(alpha < 1.0);
            assert!(alpha <= bound + 1e-6, "alpha {alpha} bound {bound} at M={m}");
        }
    }

    #[test]
    fn classifier_three_verdicts() {
        // Transient self-loop of rate 1/2: witness level 2(ln 2 - ln 1/2).
        match finite_existence_classifier(&two_state(0.5)).unwrap() {
            Classification::NotAllG { witness } => {
                assert_abs_diff_eq!(witness.values()[0], 0.0);
                assert_abs_diff_eq!(
                    witness.values()[1],
                    4.0 * 2.0f64.ln(),
                    epsilon = 1e-12
                );
            }
            other => panic!("expected NotAllG, got {other:?}"),
        }
        assert!(matches!(
            finite_existence_classifier(&cyclic()).unwrap(),
            Classification::AllG
        ));
        let rank_one =
            FiniteKernel::from_rows(vec![vec![0.4, 0.6], vec![0.4, 0.6]]).unwrap();
        assert!(matches!(
            finite_existence_classifier(&rank_one).unwrap(),
            Classification::AllG
        ));
    }

    #[test]
    fn classifier_periodic_is_unknown() {
        // Pure two-cycle: every power alternates between two supports.
        let flip = FiniteKernel::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            finite_existence_classifier(&flip).unwrap(),
            Classification::Unknown
        ));
    }

    #[test]
    fn classifier_witness_defeats_solver() {
        let witness = match finite_existence_classifier(&two_state(0.5)).unwrap() {
            Classification::NotAllG { witness } => witness,
            other => panic!("expected NotAllG, got {other:?}"),
        };
        let sol = solve_mpe(
            &two_state(0.5),
            witness.values(),
            &SolveOptions {
                span_cap: 50.0,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(sol.status, SolveStatus::Diverged);
    }
}
