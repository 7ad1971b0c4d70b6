//! A corpus of benchmark chains and rewards.
//!
//! The finite kernels here are either exact small examples (the absorbing
//! two-state chain, the symmetric three-cycle) or explicit truncations of
//! denumerable chains: a truncation keeps the first `N` states and redirects
//! the mass that would leave through the boundary back to state 1, and the
//! [`TruncationPolicy`] records exactly how much mass moved in which row.
//! Closed forms that are known for these chains (two-state iterates, the
//! fixed-point difference, the recurrent-shift eigenvalue) are provided as
//! plain functions so that solvers can be checked against them.
//!
//! State labels are `"1"`, `"2"`, ... to match the usual indexing of these
//! chains; all function arguments and returned indices are 0-based.

use serde::Serialize;

use crate::entropy::RewardFunction;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

/// Minimum size for the truncated families: smaller truncations distort the
/// structure the examples are meant to exhibit.
const MIN_TRUNCATION: usize = 8;

/// Record of how a denumerable chain was cut down to `n` states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationPolicy {
    /// Number of retained states.
    pub n: usize,
    /// 0-based index that boundary mass was redirected to.
    pub redirect_state: usize,
    /// `(row, mass)` pairs: the probability that row `row` originally sent
    /// past the boundary, now added to `redirect_state`.
    pub redirected: Vec<(usize, f64)>,
}

/// A truncated denumerable chain together with its truncation record.
#[derive(Debug, Clone)]
pub struct TruncatedChain {
    /// The truncated kernel.
    pub kernel: FiniteKernel,
    /// What the truncation did.
    pub policy: TruncationPolicy,
}

fn check_truncation_size(n: usize) -> Result<()> {
    if n < MIN_TRUNCATION {
        return Err(Error::BadParameters(format!(
            "truncated chains need at least {MIN_TRUNCATION} states, got {n}"
        )));
    }
    Ok(())
}

/// The absorbing two-state chain: state 1 is absorbing and state 2 stays put
/// with probability `lambda`, in `(0, 1)`. Its one-step mixing coefficient
/// is exactly `lambda`.
pub fn two_state(lambda: f64) -> Result<FiniteKernel> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::DomainError {
            value: lambda,
            domain: "(0, 1)",
        });
    }
    FiniteKernel::from_rows(vec![vec![1.0, 0.0], vec![1.0 - lambda, lambda]])
}

/// The symmetric three-cycle with a zero diagonal: from each state, jump to
/// either other state with probability 1/2. Its `n`-step mixing coefficient
/// is exactly `2^{-n}`, yet no one-step minorization exists.
pub fn cyclic_three() -> FiniteKernel {
    FiniteKernel::from_rows(vec![
        vec![0.0, 0.5, 0.5],
        vec![0.5, 0.0, 0.5],
        vec![0.5, 0.5, 0.0],
    ])
    .expect("static rows are stochastic")
}

/// Truncation of the shift chain: from state `i`, return to state 1 with
/// probability `1 - 2^{-i}` and advance to `i + 1` with probability `2^{-i}`.
/// The final row's advance mass (`2^{-n}`) is redirected to state 1.
pub fn shift_chain(n: usize) -> Result<TruncatedChain> {
    check_truncation_size(n)?;
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        let advance = 0.5f64.powi(i as i32 + 1);
        if i + 1 < n {
            rows[i][0] = 1.0 - advance;
            rows[i][i + 1] = advance;
        } else {
            rows[i][0] = 1.0;
        }
    }
    Ok(TruncatedChain {
        kernel: FiniteKernel::from_rows(rows)?,
        policy: TruncationPolicy {
            n,
            redirect_state: 0,
            redirected: vec![(n - 1, 0.5f64.powi(n as i32))],
        },
    })
}

/// Truncation of the full-support shift chain: from every state, return to
/// state 1 with probability 1/2 and advance with probability 1/2. The final
/// row's advance mass (1/2) is redirected to state 1.
pub fn full_support_shift(n: usize) -> Result<TruncatedChain> {
    check_truncation_size(n)?;
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        if i + 1 < n {
            rows[i][0] = 0.5;
            rows[i][i + 1] = 0.5;
        } else {
            rows[i][0] = 1.0;
        }
    }
    Ok(TruncatedChain {
        kernel: FiniteKernel::from_rows(rows)?,
        policy: TruncationPolicy {
            n,
            redirect_state: 0,
            redirected: vec![(n - 1, 0.5)],
        },
    })
}

/// Truncation of the lazy recurrent shift: state 1 stays with probability
/// 3/4 and advances with probability 1/4; every later state returns to 1
/// with probability 1/2, stays with probability 1/4, and advances with
/// probability 1/4. The final row's advance mass (1/4) is redirected to
/// state 1.
pub fn recurrent_shift(n: usize) -> Result<TruncatedChain> {
    check_truncation_size(n)?;
    let mut rows = vec![vec![0.0; n]; n];
    rows[0][0] = 0.75;
    rows[0][1] = 0.25;
    for i in 1..n {
        if i + 1 < n {
            rows[i][0] = 0.5;
            rows[i][i] = 0.25;
            rows[i][i + 1] = 0.25;
        } else {
            rows[i][0] = 0.75;
            rows[i][i] = 0.25;
        }
    }
    Ok(TruncatedChain {
        kernel: FiniteKernel::from_rows(rows)?,
        policy: TruncationPolicy {
            n,
            redirect_state: 0,
            redirected: vec![(n - 1, 0.25)],
        },
    })
}

/// Contiguous block of states, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockSpan {
    /// Index of the first state of the block.
    pub start: usize,
    /// Number of states in the block.
    pub len: usize,
}

/// The branching chain together with its block layout; block `i` (1-based)
/// is `blocks[i - 1]` and has `i + 1` states.
#[derive(Debug, Clone)]
pub struct BranchingChain {
    /// The truncated chain.
    pub chain: TruncatedChain,
    /// Block spans, in order.
    pub blocks: Vec<BlockSpan>,
}

/// Truncation of the branching chain: from the root, enter a uniformly
/// chosen state of block `i` with total probability `e^{-2^i}`, or stay at
/// the root. Inside a block, each state either returns to the root
/// (probability 1/2) or advances (probability 1/2), and the final state of a
/// block returns to the root surely.
///
/// The truncation keeps the largest whole number of blocks that fits in `n`
/// states, so the resulting chain may have fewer than `n` states; the mass
/// that pointed at dropped blocks joins the root's holding probability and
/// is recorded in the policy.
pub fn branching_chain(n: usize) -> Result<BranchingChain> {
    check_truncation_size(n)?;
    // Largest B with 1 + sum_{i=1..B} (i+1) = 1 + B(B+3)/2 <= n.
    let mut b_max = 0usize;
    while 1 + (b_max + 1) * (b_max + 4) / 2 <= n {
        b_max += 1;
    }
    if b_max == 0 {
        return Err(Error::BadParameters(format!(
            "{n} states cannot hold even one block"
        )));
    }
    let states = 1 + b_max * (b_max + 3) / 2;

    let mut blocks = Vec::with_capacity(b_max);
    let mut cursor = 1usize;
    for i in 1..=b_max {
        blocks.push(BlockSpan {
            start: cursor,
            len: i + 1,
        });
        cursor += i + 1;
    }
    debug_assert_eq!(cursor, states);

    let entry_mass = |i: usize| (-(2.0f64.powi(i as i32))).exp();
    let kept: f64 = (1..=b_max).map(entry_mass).sum();
    // Mass of the dropped blocks, folded into the root's holding probability.
    let mut dropped = 0.0;
    for i in (b_max + 1)..(b_max + 80) {
        let term = entry_mass(i);
        if term == 0.0 {
            break;
        }
        dropped += term;
    }
    let hold = 0.5 + (0.5 - kept);

    let mut rows = vec![vec![0.0; states]; states];
    rows[0][0] = hold;
    for (i, block) in blocks.iter().enumerate() {
        let per_state = entry_mass(i + 1) / block.len as f64;
        for j in 0..block.len {
            rows[0][block.start + j] = per_state;
        }
    }
    for block in &blocks {
        for j in 0..block.len {
            let x = block.start + j;
            if j + 1 < block.len {
                rows[x][0] = 0.5;
                rows[x][x + 1] = 0.5;
            } else {
                rows[x][0] = 1.0;
            }
        }
    }

    Ok(BranchingChain {
        chain: TruncatedChain {
            kernel: FiniteKernel::from_rows(rows)?,
            policy: TruncationPolicy {
                n: states,
                redirect_state: 0,
                redirected: vec![(0, dropped)],
            },
        },
        blocks,
    })
}

/// Truncation of the locally geometric chain: state 1 jumps to state
/// `i + 1` with probability `tail[i - 1]` and otherwise stays; every other
/// state returns to 1 with probability 1/2 and stays with probability 1/2.
/// `tail` must have `n - 1` non-negative entries summing to at most 1/2;
/// when omitted it defaults to `2^{-(i+1)}`. The unassigned jump mass joins
/// state 1's holding probability and is recorded as redirected.
pub fn local_geometric(n: usize, tail: Option<Vec<f64>>) -> Result<TruncatedChain> {
    check_truncation_size(n)?;
    let tail = match tail {
        Some(t) => {
            if t.len() != n - 1 {
                return Err(Error::DimensionMismatch {
                    left: t.len(),
                    right: n - 1,
                });
            }
            for (i, &a) in t.iter().enumerate() {
                if !(a >= 0.0) || !a.is_finite() {
                    return Err(Error::NegativeEntry {
                        row: 0,
                        col: i + 1,
                        value: a,
                    });
                }
            }
            t
        }
        None => (0..n - 1).map(|i| 0.5f64.powi(i as i32 + 2)).collect(),
    };
    let total: f64 = tail.iter().sum();
    let leftover = 0.5 - total;
    if leftover < -1e-12 {
        return Err(Error::BadParameters(format!(
            "jump masses sum to {total}, exceeding 1/2"
        )));
    }
    let leftover = leftover.max(0.0);

    let mut rows = vec![vec![0.0; n]; n];
    rows[0][0] = 0.5 + leftover;
    for (i, &a) in tail.iter().enumerate() {
        rows[0][i + 1] = a;
    }
    for i in 1..n {
        rows[i][0] = 0.5;
        rows[i][i] = 0.5;
    }
    Ok(TruncatedChain {
        kernel: FiniteKernel::from_rows(rows)?,
        policy: TruncationPolicy {
            n,
            redirect_state: 0,
            redirected: vec![(0, leftover)],
        },
    })
}

/// Reward that pays `k` on the odd-labeled states from 3 on: in 0-based
/// indices, `g(x) = k` when `x` is even and positive, else 0. On the
/// recurrent shift this alternates payment along the spine with period two.
pub fn period_two_reward(n: usize, k: f64) -> Result<RewardFunction> {
    if !k.is_finite() {
        return Err(Error::BadParameters(format!("level k = {k} must be finite")));
    }
    let values = (0..n)
        .map(|x| {
            let label = x + 1;
            if label >= 3 && label % 2 == 1 {
                k
            } else {
                0.0
            }
        })
        .collect();
    RewardFunction::new(values)
}

/// Reward constant on dyadic half-blocks of the labels: label `L` in
/// `[2^b, 1.5 * 2^b)` pays 0 and `L` in `[1.5 * 2^b, 2^{b+1})` pays `high`.
pub fn block_reward(n: usize, high: f64) -> Result<RewardFunction> {
    if !high.is_finite() {
        return Err(Error::BadParameters(format!(
            "level high = {high} must be finite"
        )));
    }
    let values = (0..n)
        .map(|x| {
            let label = (x + 1) as u64;
            let b = 63 - label.leading_zeros() as u64;
            // Upper half of the dyadic block: 2 L >= 3 * 2^b.
            if 2 * label >= 3 * (1u64 << b) {
                high
            } else {
                0.0
            }
        })
        .collect();
    RewardFunction::new(values)
}

/// Reward paying `k` on every block state except the final state of each
/// block (and nothing at the root).
pub fn branching_reward(chain: &BranchingChain, k: f64) -> Result<RewardFunction> {
    if !k.is_finite() {
        return Err(Error::BadParameters(format!("level k = {k} must be finite")));
    }
    let n = chain.chain.kernel.n();
    let mut values = vec![0.0; n];
    for block in &chain.blocks {
        for j in 0..block.len - 1 {
            values[block.start + j] = k;
        }
    }
    RewardFunction::new(values)
}

/// Lipschitz bump vanishing on the ball of radius `eta - 1/m` around
/// `center` (in index distance), rising with slope `m`, and capped at 1.
/// Returns the reward together with the 0-based indices of the closed ball
/// `B(center, eta)`. Requires `m >= 1` and `eta > 1/m` so that the reward is
/// 1 everywhere outside the ball.
pub fn bump_reward(
    n: usize,
    center: usize,
    eta: f64,
    m: f64,
) -> Result<(RewardFunction, Vec<usize>)> {
    if center >= n {
        return Err(Error::BadState { index: center, n });
    }
    if !(m >= 1.0) {
        return Err(Error::BadParameters(format!("slope m = {m} must be >= 1")));
    }
    if !(eta > 1.0 / m) {
        return Err(Error::BadParameters(format!(
            "radius eta = {eta} must exceed 1/m = {}",
            1.0 / m
        )));
    }
    let mut values = Vec::with_capacity(n);
    let mut ball = Vec::new();
    for x in 0..n {
        let dist = (x as f64 - center as f64).abs();
        values.push((m * (dist - (eta - 1.0 / m)).max(0.0)).min(1.0));
        if dist <= eta {
            ball.push(x);
        }
    }
    Ok((RewardFunction::new(values)?, ball))
}

/// Does the two-state MPE with `g = (g1, g2)` and stay probability `lambda`
/// admit a bounded solution? Yes exactly when the absorbing state pays at
/// least as well (`g1 > g2`), or the reward span is below the sharp
/// threshold `-ln sqrt(lambda)`.
pub fn two_state_exists(lambda: f64, g1: f64, g2: f64) -> Result<bool> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::DomainError {
            value: lambda,
            domain: "(0, 1)",
        });
    }
    let span = 0.5 * (g1 - g2).abs();
    Ok(g1 > g2 || span < -0.5 * lambda.ln())
}

/// Closed-form two-state solution `(lambda_star, w(x1) - w(x2))`: the
/// eigenvalue is `g1` (the absorbing state's reward) and the difference is
/// `ln((e^{g1 - g2} - lambda) / (1 - lambda))`. Errors when no bounded
/// solution exists.
pub fn two_state_closed_form(lambda: f64, g1: f64, g2: f64) -> Result<(f64, f64)> {
    if !two_state_exists(lambda, g1, g2)? {
        return Err(Error::DomainError {
            value: g1 - g2,
            domain: "g1 - g2 > ln(lambda)",
        });
    }
    let delta = (((g1 - g2).exp() - lambda) / (1.0 - lambda)).ln();
    Ok((g1, delta))
}

/// Value at the non-absorbing state of the `n`-th operator iterate from 0,
/// for the two-state chain with `lambda = 1/2` and `g = (0, ln k)`:
/// `e^{v_n} = sum_{i=1..n} (k/2)^i + (k/2)^n`.
pub fn two_state_iterate_value(k: f64, n: usize) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::DomainError {
            value: k,
            domain: "k > 0",
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let r = 0.5 * k;
    let mut sum = 0.0;
    let mut power = 1.0;
    for _ in 0..n {
        power *= r;
        sum += power;
    }
    Ok((sum + power).ln())
}

/// Eigenvalue of the recurrent shift with the period-two reward at level
/// `k`: `ln(1/2 + (e^k + sqrt(12 + e^{2k} - 4 e^k)) / 8)`.
pub fn recurrent_shift_lambda(k: f64) -> Result<f64> {
    if !k.is_finite() {
        return Err(Error::BadParameters(format!("level k = {k} must be finite")));
    }
    let ek = k.exp();
    let root = (12.0 + ek * ek - 4.0 * ek).sqrt();
    Ok((0.5 + (root + ek) / 8.0).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpe::apply_t;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_state_rows() {
        let k = two_state(0.5).unwrap();
        assert_eq!(k.row(0), &[1.0, 0.0]);
        assert_eq!(k.row(1), &[0.5, 0.5]);
        assert!(two_state(0.0).is_err());
        assert!(two_state(1.0).is_err());
    }

    #[test]
    fn cyclic_three_rows() {
        let k = cyclic_three();
        for i in 0..3 {
            assert_eq!(k.entry(i, i), 0.0);
            assert_abs_diff_eq!(k.row(i).iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn shift_chain_structure() {
        let t = shift_chain(8).unwrap();
        let k = &t.kernel;
        assert_abs_diff_eq!(k.entry(0, 0), 0.5);
        assert_abs_diff_eq!(k.entry(0, 1), 0.5);
        assert_abs_diff_eq!(k.entry(2, 3), 0.125);
        assert_abs_diff_eq!(k.entry(7, 0), 1.0);
        assert_eq!(t.policy.redirected, vec![(7, 0.5f64.powi(8))]);
        assert!(shift_chain(4).is_err());
    }

    #[test]
    fn full_support_shift_structure() {
        let t = full_support_shift(8).unwrap();
        for i in 0..7 {
            assert_abs_diff_eq!(t.kernel.entry(i, 0), 0.5);
            assert_abs_diff_eq!(t.kernel.entry(i, i + 1), 0.5);
        }
        assert_abs_diff_eq!(t.kernel.entry(7, 0), 1.0);
        assert_eq!(t.policy.redirected, vec![(7, 0.5)]);
    }

    #[test]
    fn recurrent_shift_structure() {
        let t = recurrent_shift(8).unwrap();
        let k = &t.kernel;
        assert_abs_diff_eq!(k.entry(0, 0), 0.75);
        assert_abs_diff_eq!(k.entry(0, 1), 0.25);
        assert_abs_diff_eq!(k.entry(3, 0), 0.5);
        assert_abs_diff_eq!(k.entry(3, 3), 0.25);
        assert_abs_diff_eq!(k.entry(3, 4), 0.25);
        assert_abs_diff_eq!(k.entry(7, 0), 0.75);
        assert_abs_diff_eq!(k.entry(7, 7), 0.25);
        assert_eq!(t.policy.redirected, vec![(7, 0.25)]);
    }

    #[test]
    fn branching_chain_layout() {
        let bc = branching_chain(20).unwrap();
        // 1 + 2 + 3 + 4 = 10 <= 20 but adding block 4 (5 states) gives 15 <= 20,
        // and block 5 (6 states) would need 21: four blocks, 15 states.
        assert_eq!(bc.blocks.len(), 4);
        assert_eq!(bc.chain.kernel.n(), 15);
        assert_eq!(bc.blocks[0], BlockSpan { start: 1, len: 2 });
        assert_eq!(bc.blocks[3], BlockSpan { start: 10, len: 5 });
        // Root row: block entries are uniform within each block.
        let k = &bc.chain.kernel;
        let e1 = (-2.0f64).exp() / 2.0;
        assert_abs_diff_eq!(k.entry(0, 1), e1, epsilon = 1e-15);
        assert_abs_diff_eq!(k.entry(0, 2), e1, epsilon = 1e-15);
        // Interior and final block states.
        assert_abs_diff_eq!(k.entry(1, 0), 0.5);
        assert_abs_diff_eq!(k.entry(1, 2), 0.5);
        assert_abs_diff_eq!(k.entry(2, 0), 1.0);
        // Redirected mass is the dropped blocks' entry mass.
        let (row, mass) = bc.chain.policy.redirected[0];
        assert_eq!(row, 0);
        assert_abs_diff_eq!(mass, (-32.0f64).exp(), epsilon = 1e-18);
    }

    #[test]
    fn local_geometric_structure() {
        let t = local_geometric(8, None).unwrap();
        let k = &t.kernel;
        // Default tail 2^{-(i+1)}: leftover is 2^{-8}.
        assert_abs_diff_eq!(k.entry(0, 1), 0.25);
        assert_abs_diff_eq!(k.entry(0, 7), 0.5f64.powi(8));
        assert_abs_diff_eq!(k.entry(0, 0), 0.5 + 0.5f64.powi(8));
        assert_abs_diff_eq!(k.entry(3, 0), 0.5);
        assert_abs_diff_eq!(k.entry(3, 3), 0.5);
        let (_, mass) = t.policy.redirected[0];
        assert_abs_diff_eq!(mass, 0.5f64.powi(8), epsilon = 1e-18);
    }

    #[test]
    fn period_two_reward_parity() {
        let g = period_two_reward(6, 2.0).unwrap();
        // Labels 1..6: pay on 3 and 5.
        assert_eq!(g.values(), &[0.0, 0.0, 2.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn block_reward_halves() {
        let g = block_reward(8, 1.0).unwrap();
        // Labels 1..8: high on 3, 6, 7 (upper halves of [2,4) and [4,8)).
        assert_eq!(g.values(), &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn branching_reward_skips_block_ends() {
        let bc = branching_chain(20).unwrap();
        let g = branching_reward(&bc, 3.0).unwrap();
        assert_eq!(g.values()[0], 0.0);
        // Block 1 at indices 1..=2: pay on 1, not 2.
        assert_eq!(g.values()[1], 3.0);
        assert_eq!(g.values()[2], 0.0);
        // Block 4 at indices 10..=14: pay on 10..=13, not 14.
        assert_eq!(g.values()[13], 3.0);
        assert_eq!(g.values()[14], 0.0);
    }

    #[test]
    fn bump_reward_shape() {
        let (g, ball) = bump_reward(9, 4, 2.0, 2.0).unwrap();
        // Vanishes within distance 1.5, slope 2, capped at 1.
        assert_eq!(g.values()[4], 0.0);
        assert_eq!(g.values()[3], 0.0);
        assert_abs_diff_eq!(g.values()[2], 1.0);
        assert_abs_diff_eq!(g.values()[0], 1.0);
        assert_eq!(ball, vec![2, 3, 4, 5, 6]);
        assert!(bump_reward(9, 4, 0.3, 2.0).is_err());
    }

    #[test]
    fn existence_criterion_two_clauses() {
        // Positive drift toward the absorbing state: always exists.
        assert!(two_state_exists(0.5, 1.0, 0.0).unwrap());
        // Small span: exists.
        assert!(two_state_exists(0.5, 0.0, 1.9f64.ln()).unwrap());
        // Beyond the threshold: does not exist.
        assert!(!two_state_exists(0.5, 0.0, 2.1f64.ln()).unwrap());
        // Boundary g1 - g2 = ln(lambda): strictly fails.
        assert!(!two_state_exists(0.5, 0.0, 2.0f64.ln()).unwrap());
    }

    #[test]
    fn closed_form_difference() {
        let (lam, delta) = two_state_closed_form(0.5, 0.0, 1.5f64.ln()).unwrap();
        assert_abs_diff_eq!(lam, 0.0);
        assert_abs_diff_eq!(delta, -(3.0f64.ln()), epsilon = 1e-15);
        assert!(two_state_closed_form(0.5, 0.0, 2.0f64.ln()).is_err());
    }

    #[test]
    fn iterate_closed_form_matches_operator() {
        let kernel = two_state(0.5).unwrap();
        for k in [0.5, 1.5, 2.5] {
            let g = [0.0, (k as f64).ln()];
            let mut f = vec![0.0, 0.0];
            for n in 1..=12 {
                f = apply_t(&kernel, &g, &f).unwrap();
                assert_abs_diff_eq!(f[0], 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(
                    f[1],
                    two_state_iterate_value(k, n).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn recurrent_shift_lambda_at_zero() {
        assert_abs_diff_eq!(recurrent_shift_lambda(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(recurrent_shift_lambda(1.0).unwrap() > 0.0);
    }
}
