//! The numbered verification suite: sixteen self-contained criteria that
//! exercise the crate end to end against closed forms, property sweeps, and
//! Monte Carlo cross-checks. Each criterion runs independently and reports
//! one pass/fail line; the set runs in parallel (capped by the
//! `MPELAB_THREADS` environment variable).

use mpelab::*;
use rayon::prelude::*;
use serde::Serialize;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    /// 1-based criterion number.
    pub id: u32,
    /// Short stable name.
    pub name: &'static str,
    /// Did every check inside the criterion hold?
    pub passed: bool,
    /// Summary of what was measured (or what failed).
    pub detail: String,
}

impl CriterionResult {
    /// The one-line rendering used by the CLI and the acceptance test.
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} {} {:<26} {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// All criteria in id order, with their names.
pub const CRITERIA: [(u32, &str); 16] = [
    (1, "two-state-threshold"),
    (2, "two-state-closed-form"),
    (3, "sharp-bound-suite"),
    (4, "convergence-envelope"),
    (5, "mixing-relations"),
    (6, "entropic-duality"),
    (7, "local-contraction"),
    (8, "shift-chain-profile"),
    (9, "wide-truncation-divergence"),
    (10, "recurrent-shift-formula"),
    (11, "stochastic-dominance"),
    (12, "additive-contrast"),
    (13, "existence-classifier"),
    (14, "escape-rates"),
    (15, "hitting-tail-bound"),
    (16, "monte-carlo-consistency"),
];

/// Run the criteria whose number or name contains `filter` (all when
/// `None`), in parallel, and return the results in id order.
pub fn run(filter: Option<&str>) -> Vec<CriterionResult> {
    let selected: Vec<(u32, &'static str)> = CRITERIA
        .iter()
        .copied()
        .filter(|(id, name)| match filter {
            None => true,
            Some(f) => id.to_string() == f || name.contains(f),
        })
        .collect();

    let threads = std::env::var("MPELAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        builder.build().expect("thread pool")
    };

    let mut results: Vec<CriterionResult> = pool.install(|| {
        selected
            .par_iter()
            .map(|&(id, name)| {
                let outcome = std::panic::catch_unwind(|| dispatch(id));
                let (passed, detail) = match outcome {
                    Ok(Ok(detail)) => (true, detail),
                    Ok(Err(failure)) => (false, failure),
                    Err(panic) => {
                        let message = panic
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panicked".into());
                        (false, format!("panicked: {message}"))
                    }
                };
                CriterionResult {
                    id,
                    name,
                    passed,
                    detail,
                }
            })
            .collect()
    });
    results.sort_by_key(|r| r.id);
    results
}

type Check = std::result::Result<String, String>;

fn dispatch(id: u32) -> Check {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        13 => criterion_13(),
        14 => criterion_14(),
        15 => criterion_15(),
        16 => criterion_16(),
        _ => Err(format!("unknown criterion {id}")),
    }
}

fn fail(message: impl Into<String>) -> Check {
    Err(message.into())
}

// ---------------------------------------------------------------------------
// Shared fixtures.
// ---------------------------------------------------------------------------

/// Solver options for the threshold experiments: a tight span cap catches
/// the slow logarithmic divergence at the critical level inside a small
/// iteration budget.
fn threshold_options() -> SolveOptions {
    SolveOptions {
        tol: 1e-10,
        max_iter: 10_000,
        span_cap: 3.0,
        anchor: None,
    }
}

/// A random row-stochastic kernel with unit-Dirichlet rows.
fn dirichlet_kernel(states: usize, master: u64, stream: u64) -> FiniteKernel {
    let mut s = Substream::new(master, stream);
    let rows: Vec<Vec<f64>> = (0..states)
        .map(|_| {
            let weights: Vec<f64> = (0..states).map(|_| -(1.0 - s.next_f64()).ln()).collect();
            let total: f64 = weights.iter().sum();
            weights.into_iter().map(|w| w / total).collect()
        })
        .collect();
    FiniteKernel::from_rows(rows).expect("normalized rows")
}

/// Like [`dirichlet_kernel`] but with roughly a third of the entries zeroed
/// (rows stay stochastic; at least one entry survives per row).
fn sparse_kernel(states: usize, master: u64, stream: u64) -> FiniteKernel {
    let mut s = Substream::new(master, stream);
    let rows: Vec<Vec<f64>> = (0..states)
        .map(|_| {
            let mut weights: Vec<f64> = (0..states)
                .map(|_| {
                    let w = -(1.0 - s.next_f64()).ln();
                    if s.next_f64() < 0.35 {
                        0.0
                    } else {
                        w
                    }
                })
                .collect();
            if weights.iter().all(|&w| w == 0.0) {
                weights[0] = 1.0;
            }
            let total: f64 = weights.iter().sum();
            weights.into_iter().map(|w| w / total).collect()
        })
        .collect();
    FiniteKernel::from_rows(rows).expect("normalized rows")
}

fn uniform_vec(len: usize, lo: f64, hi: f64, master: u64, stream: u64) -> Vec<f64> {
    let mut s = Substream::new(master, stream);
    (0..len).map(|_| lo + (hi - lo) * s.next_f64()).collect()
}

/// The 200 kernel/reward pairs of the sharp-bound suite: sizes 3..=10,
/// rewards rescaled so that the span is exactly 99% of the one-step
/// threshold.
fn sharp_suite() -> Vec<(FiniteKernel, Vec<f64>)> {
    const MASTER: u64 = 0xA3C3;
    (0..200u64)
        .map(|t| {
            let states = 3 + (t as usize % 8);
            let kernel = dirichlet_kernel(states, MASTER, 2 * t);
            let lambda1 = dobrushin_coefficient(&kernel, 1).expect("coefficient");
            let bound = sharp_bound(lambda1).expect("dense kernel has coefficient in (0,1)");
            let raw = uniform_vec(states, 0.0, 1.0, MASTER, 2 * t + 1);
            let raw_span = span_seminorm(&raw);
            let scale = 0.99 * bound / raw_span;
            let g = raw.iter().map(|&v| v * scale).collect();
            (kernel, g)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

/// Two-state threshold: below the critical reward span the solver converges
/// to the zero eigenvalue; above it, it diverges.
fn criterion_1() -> Check {
    let kernel = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let opts = threshold_options();
    let mut worst_lambda = 0.0f64;
    let mut worst_residual = 0.0f64;
    for k in [0.5, 1.0, 1.9] {
        let g = [0.0, (k as f64).ln()];
        let sol = solve_mpe(&kernel, &g, &opts).map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved {
            return fail(format!("k={k}: expected Solved, got {:?}", sol.status));
        }
        if sol.lambda.abs() > 1e-8 {
            return fail(format!("k={k}: lambda {} exceeds 1e-8", sol.lambda));
        }
        if sol.residual >= 1e-8 {
            return fail(format!("k={k}: residual {} exceeds 1e-8", sol.residual));
        }
        worst_lambda = worst_lambda.max(sol.lambda.abs());
        worst_residual = worst_residual.max(sol.residual);
    }
    let mut crossings = Vec::new();
    for k in [2.0, 2.1, 4.0] {
        let g = [0.0, (k as f64).ln()];
        let sol = solve_mpe(&kernel, &g, &opts).map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Diverged {
            return fail(format!("k={k}: expected Diverged, got {:?}", sol.status));
        }
        crossings.push(sol.iterations());
    }
    Ok(format!(
        "subcritical solved (|lambda| <= {worst_lambda:.1e}, residual <= {worst_residual:.1e}); \
         supercritical diverged at iterations {crossings:?}"
    ))
}

/// Two-state closed form: the solved difference matches the fixed-point
/// equation's root.
fn criterion_2() -> Check {
    let lambda = 0.5;
    let kernel = corpus::two_state(lambda).map_err(|e| e.to_string())?;
    let g = [0.0, 1.5f64.ln()];
    let sol = solve_mpe(&kernel, &g, &SolveOptions::default()).map_err(|e| e.to_string())?;
    if sol.status != SolveStatus::Solved {
        return fail(format!("expected Solved, got {:?}", sol.status));
    }
    let (_, delta) =
        corpus::two_state_closed_form(lambda, g[0], g[1]).map_err(|e| e.to_string())?;
    let err = (sol.w[0] - sol.w[1] - delta).abs();
    if err > 1e-8 {
        return fail(format!(
            "difference {} vs closed form {delta}: error {err:.2e}",
            sol.w[0] - sol.w[1]
        ));
    }
    Ok(format!(
        "w difference matches ln((e^(g1-g2) - L)/(1 - L)) within {err:.1e}"
    ))
}

/// Sharp-bound suite: 200 random kernels with rewards at 99% of the
/// threshold all solve cleanly.
fn criterion_3() -> Check {
    let mut worst_residual = 0.0f64;
    for (i, (kernel, g)) in sharp_suite().iter().enumerate() {
        let sol = solve_mpe(kernel, g, &SolveOptions::default()).map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved {
            return fail(format!("instance {i}: {:?}", sol.status));
        }
        if sol.residual >= 1e-8 {
            return fail(format!("instance {i}: residual {}", sol.residual));
        }
        worst_residual = worst_residual.max(sol.residual);
    }
    Ok(format!(
        "200/200 solved below the threshold; worst residual {worst_residual:.1e}"
    ))
}

/// Convergence envelope: on every solved instance from criteria 1-3 the
/// finite-horizon averages stay within `2 ||w||_sp / n` of the eigenvalue.
fn criterion_4() -> Check {
    let kernel = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let mut instances: Vec<(FiniteKernel, Vec<f64>)> = [0.5, 1.0, 1.5, 1.9]
        .iter()
        .map(|&k| (kernel.clone(), vec![0.0, (k as f64).ln()]))
        .collect();
    instances.extend(sharp_suite());

    let mut max_excess = f64::NEG_INFINITY;
    for (i, (kernel, g)) in instances.iter().enumerate() {
        let sol = solve_mpe(kernel, g, &SolveOptions::default()).map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved {
            return fail(format!("instance {i} did not solve: {:?}", sol.status));
        }
        let span_w = span_seminorm(&sol.w);
        let mut f = vec![0.0; kernel.n()];
        for n in 1..=200usize {
            f = apply_t(kernel, g, &f).map_err(|e| e.to_string())?;
            for (x, &fx) in f.iter().enumerate() {
                let excess = (sol.lambda - fx / n as f64).abs() - 2.0 * span_w / n as f64;
                max_excess = max_excess.max(excess);
                if excess > 1e-8 {
                    return fail(format!(
                        "instance {i}, state {x}, n={n}: envelope exceeded by {excess:.2e}"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "204 solved instances stay within 2||w||/n; max excess {max_excess:.1e}"
    ))
}

/// Mixing relations on 200 random kernels, plus a brute-force check that the
/// pairwise Dobrushin value is the subset supremum.
fn criterion_5() -> Check {
    const MASTER: u64 = 0x55;
    let mut worst_violation = f64::NEG_INFINITY;
    let mut worst_brute = 0.0f64;
    for t in 0..200u64 {
        let states = 2 + (t as usize % 9); // 2..=10
        let kernel = if t % 2 == 0 {
            dirichlet_kernel(states, MASTER, t)
        } else {
            sparse_kernel(states, MASTER, t)
        };
        // Lambda_{n+m} <= Lambda_n Lambda_m and Lambda_n <= 1 - d_n for
        // n, m <= 4 (check_relations covers 1..=2*n_max).
        match check_relations(&kernel, 4) {
            Ok(relations) => worst_violation = worst_violation.max(relations.max_violation()),
            Err(e) => return fail(format!("kernel {t}: {e}")),
        }
        // Brute force: max over row pairs of sup_A |P(i, A) - P(j, A)|.
        let lambda1 = dobrushin_coefficient(&kernel, 1).map_err(|e| e.to_string())?;
        let mut sup = 0.0f64;
        for i in 0..states {
            for j in (i + 1)..states {
                for mask in 0u32..(1 << states) {
                    let mut diff = 0.0;
                    for y in 0..states {
                        if mask & (1 << y) != 0 {
                            diff += kernel.entry(i, y) - kernel.entry(j, y);
                        }
                    }
                    sup = sup.max(diff.abs());
                }
            }
        }
        let gap = (lambda1 - sup).abs();
        worst_brute = worst_brute.max(gap);
        if gap > 1e-12 {
            return fail(format!(
                "kernel {t}: pairwise value {lambda1} vs subset supremum {sup}"
            ));
        }
    }
    Ok(format!(
        "200 kernels: relation slack {worst_violation:.1e}, \
         subset-supremum gap <= {worst_brute:.1e}"
    ))
}

/// Entropic duality: the variational gap is nonnegative and vanishes at the
/// tilted measure.
fn criterion_6() -> Check {
    const MASTER: u64 = 0x66;
    let mut min_gap = f64::INFINITY;
    let mut worst_at_tilt = 0.0f64;
    for t in 0..1000u64 {
        let kernel = dirichlet_kernel(4, MASTER, 3 * t);
        let f = uniform_vec(4, -2.0, 2.0, MASTER, 3 * t + 1);
        let mu_raw = uniform_vec(4, 1e-6, 1.0, MASTER, 3 * t + 2);
        let total: f64 = mu_raw.iter().sum();
        let mu = Distribution::new(mu_raw.iter().map(|&w| w / total).collect())
            .map_err(|e| e.to_string())?;
        let x = (t % 4) as usize;
        let gap = dual_gap(&kernel, x, &f, &mu).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(gap);
        if gap < -1e-10 {
            return fail(format!("triple {t}: negative gap {gap:.2e}"));
        }
        let tilt = esscher_measure(&kernel, x, &f).map_err(|e| e.to_string())?;
        let at_tilt = dual_gap(&kernel, x, &f, &tilt).map_err(|e| e.to_string())?;
        worst_at_tilt = worst_at_tilt.max(at_tilt.abs());
        if at_tilt.abs() > 1e-10 {
            return fail(format!("triple {t}: gap at the tilt {at_tilt:.2e}"));
        }
    }
    Ok(format!(
        "1000 triples: min gap {min_gap:.1e} >= -1e-10, gap at tilt <= {worst_at_tilt:.1e}"
    ))
}

/// Local contraction: the empirical factor respects the sigmoid bound.
fn criterion_7() -> Check {
    let kernel = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let g = [0.0, 0.0];
    let mut details = Vec::new();
    for m in [0.5, 1.0, 2.0] {
        let alpha = local_contraction_estimate(&kernel, &g, m, 10_000, 0x77)
            .map_err(|e| e.to_string())?;
        let bound = 1.0 / (1.0 + (-m as f64).exp());
        if alpha >= 1.0 {
            return fail(format!("M={m}: estimate {alpha} not below 1"));
        }
        if alpha > bound + 1e-6 {
            return fail(format!("M={m}: estimate {alpha} above bound {bound}"));
        }
        details.push(format!("M={m}: {alpha:.4} <= {bound:.4}"));
    }
    Ok(details.join("; "))
}

/// Shift chain: strong mixing fails through n = 62 while the one-step
/// coefficient is exactly 1/2 and arbitrary bounded rewards still solve.
fn criterion_8() -> Check {
    let chain = corpus::shift_chain(64).map_err(|e| e.to_string())?;
    let lambda1 = dobrushin_coefficient(&chain.kernel, 1).map_err(|e| e.to_string())?;
    if lambda1 != 0.5 {
        return fail(format!("one-step coefficient {lambda1} is not exactly 1/2"));
    }
    for n in 1..=62usize {
        let ratio = strong_mixing_ratio(&chain.kernel, n).map_err(|e| e.to_string())?;
        if !ratio.is_infinite() {
            return fail(format!("strong ratio finite ({ratio}) already at n={n}"));
        }
    }
    let mut worst_residual = 0.0f64;
    for t in 0..5u64 {
        let g = uniform_vec(64, -2.0, 2.0, 0x88, t);
        let sol = solve_mpe(&chain.kernel, &g, &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved || sol.residual >= 1e-8 {
            return fail(format!(
                "reward {t}: {:?} with residual {}",
                sol.status, sol.residual
            ));
        }
        worst_residual = worst_residual.max(sol.residual);
    }
    Ok(format!(
        "coefficient exactly 1/2; ratio infinite for n <= 62; \
         5 bounded rewards solved (residual <= {worst_residual:.1e})"
    ))
}

/// Wide truncation: the 256-state full-support shift with the dyadic block
/// reward blows past a span of 10 — the bounded-span iteration finds no
/// moderate solution because every solution of the truncation is wide.
fn criterion_9() -> Check {
    let chain = corpus::full_support_shift(256).map_err(|e| e.to_string())?;
    let high = 2.0 * (2.0f64.ln() + 0.5);
    let g = corpus::block_reward(256, high).map_err(|e| e.to_string())?;
    let opts = SolveOptions {
        tol: 1e-10,
        max_iter: 10_000,
        span_cap: 10.0,
        anchor: None,
    };
    let sol = solve_mpe(&chain.kernel, g.values(), &opts).map_err(|e| e.to_string())?;
    if sol.status != SolveStatus::Diverged {
        return fail(format!("expected Diverged, got {:?}", sol.status));
    }
    Ok(format!(
        "span crossed {} at iteration {}",
        opts.span_cap,
        sol.iterations()
    ))
}

/// Recurrent shift closed form: eigenvalue formula and the stepwise
/// difference structure of the solution.
fn criterion_10() -> Check {
    let chain = corpus::recurrent_shift(200).map_err(|e| e.to_string())?;
    let mut worst_lambda = 0.0f64;
    let mut worst_step = 0.0f64;
    for k in [0.5, 1.0, 2.0] {
        let g = corpus::period_two_reward(200, k).map_err(|e| e.to_string())?;
        let sol = solve_mpe(&chain.kernel, g.values(), &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved {
            return fail(format!("k={k}: {:?}", sol.status));
        }
        let predicted = corpus::recurrent_shift_lambda(k).map_err(|e| e.to_string())?;
        let lambda_err = (sol.lambda - predicted).abs();
        worst_lambda = worst_lambda.max(lambda_err);
        if lambda_err > 1e-6 {
            return fail(format!(
                "k={k}: lambda {} vs formula {predicted} (error {lambda_err:.2e})",
                sol.lambda
            ));
        }
        for label in (2..=40usize).step_by(2) {
            let i = label - 1;
            let step_err = (sol.w[i] - sol.w[i + 1] + k).abs();
            worst_step = worst_step.max(step_err);
            if step_err > 1e-6 {
                return fail(format!(
                    "k={k}, label {label}: w(i)-w(i+1) = {} (error {step_err:.2e})",
                    sol.w[i] - sol.w[i + 1]
                ));
            }
        }
    }
    let zero = corpus::period_two_reward(200, 0.0).map_err(|e| e.to_string())?;
    let sol = solve_mpe(&chain.kernel, zero.values(), &SolveOptions::default())
        .map_err(|e| e.to_string())?;
    if sol.lambda.abs() > 1e-10 {
        return fail(format!("k=0: lambda {} not zero", sol.lambda));
    }
    Ok(format!(
        "lambda matches the formula within {worst_lambda:.1e}; \
         stepwise differences within {worst_step:.1e}"
    ))
}

/// Stochastic dominance: the exact partial-sum law under the period-two
/// reward dominates the law under the block reward, and the lattice dynamic
/// program agrees with full path enumeration.
fn criterion_11() -> Check {
    let chain = corpus::recurrent_shift(64).map_err(|e| e.to_string())?;
    let g1 = corpus::period_two_reward(64, 1.0).map_err(|e| e.to_string())?;
    let g2 = corpus::block_reward(64, 1.0).map_err(|e| e.to_string())?;
    let a = partial_sum_distribution(&chain.kernel, g1.values(), 0, 10)
        .map_err(|e| e.to_string())?;
    let b = partial_sum_distribution(&chain.kernel, g2.values(), 0, 10)
        .map_err(|e| e.to_string())?;
    let verdict = stochastic_dominance(&a, &b);
    if verdict != Dominance::Dominates {
        return fail(format!("expected Dominates, got {verdict:?}"));
    }

    // Enumeration cross-check on a 4-state fixture at horizon 6.
    let fixture = FiniteKernel::from_rows(vec![
        vec![0.2, 0.3, 0.5, 0.0],
        vec![0.0, 0.5, 0.25, 0.25],
        vec![0.4, 0.0, 0.1, 0.5],
        vec![1.0, 0.0, 0.0, 0.0],
    ])
    .map_err(|e| e.to_string())?;
    let g = [0.0, 0.5, 1.0, 0.25];
    let n = 6;
    let mut worst_gap = 0.0f64;
    for start in 0..4usize {
        let law =
            partial_sum_distribution(&fixture, &g, start, n).map_err(|e| e.to_string())?;
        let mut brute: std::collections::BTreeMap<i64, f64> = Default::default();
        let mut stack = vec![(start, 0usize, g[start], 1.0f64)];
        while let Some((state, depth, sum, prob)) = stack.pop() {
            if depth == n - 1 {
                *brute.entry((sum * 4.0).round() as i64).or_insert(0.0) += prob;
                continue;
            }
            for y in 0..4 {
                let p = fixture.entry(state, y);
                if p > 0.0 {
                    stack.push((y, depth + 1, sum + g[y], prob * p));
                }
            }
        }
        for (kidx, &p) in law.probabilities.iter().enumerate() {
            let value = law.offset + kidx as f64 * law.delta;
            let expected = brute
                .get(&((value * 4.0).round() as i64))
                .copied()
                .unwrap_or(0.0);
            let gap = (p - expected).abs();
            worst_gap = worst_gap.max(gap);
            if gap > 1e-12 {
                return fail(format!(
                    "start {start}: law({value}) = {p} vs enumeration {expected}"
                ));
            }
        }
    }
    Ok(format!(
        "period-two law dominates the block law at horizon 10; \
         dynamic program matches enumeration within {worst_gap:.1e}"
    ))
}

/// Additive contrast: where the multiplicative equation diverges, the
/// additive one still solves exactly.
fn criterion_12() -> Check {
    let kernel = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let g = [0.0, 4.0f64.ln()];
    let mpe = solve_mpe(&kernel, &g, &threshold_options()).map_err(|e| e.to_string())?;
    if mpe.status != SolveStatus::Diverged {
        return fail(format!("multiplicative solve: expected Diverged, got {:?}", mpe.status));
    }
    let ape = solve_ape(&kernel, &g, None).map_err(|e| e.to_string())?;
    if (ape.lambda0 - g[0]).abs() > 1e-12 {
        return fail(format!("additive eigenvalue {} is not g(x1) = {}", ape.lambda0, g[0]));
    }
    if ape.residual >= 1e-10 {
        return fail(format!("additive residual {}", ape.residual));
    }
    Ok(format!(
        "multiplicative diverged; additive solved with lambda0 = g(x1) and residual {:.1e}",
        ape.residual
    ))
}

/// Existence classifier: the transient self-loop yields a divergence
/// witness; the cyclic and rank-one kernels admit solutions for every
/// reward.
fn criterion_13() -> Check {
    let two = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let witness = match finite_existence_classifier(&two).map_err(|e| e.to_string())? {
        Classification::NotAllG { witness } => witness,
        other => return fail(format!("two-state: expected NotAllG, got {other:?}")),
    };
    let sol = solve_mpe(&two, witness.values(), &SolveOptions::default())
        .map_err(|e| e.to_string())?;
    if sol.status != SolveStatus::Diverged {
        return fail(format!("witness reward did not diverge: {:?}", sol.status));
    }
    match finite_existence_classifier(&corpus::cyclic_three()).map_err(|e| e.to_string())? {
        Classification::AllG => {}
        other => return fail(format!("cyclic: expected AllG, got {other:?}")),
    }
    let rank_one = FiniteKernel::from_rows(vec![vec![0.4, 0.6], vec![0.4, 0.6]])
        .map_err(|e| e.to_string())?;
    match finite_existence_classifier(&rank_one).map_err(|e| e.to_string())? {
        Classification::AllG => {}
        other => return fail(format!("rank-one: expected AllG, got {other:?}")),
    }
    Ok(format!(
        "witness level {:.4} diverged at iteration {}; cyclic and rank-one are AllG",
        witness.values()[1],
        sol.iterations()
    ))
}

/// Escape rates: the two-state complement escapes at rate exactly 1/2 (so
/// alpha = 1/4 fails), while an acyclic transient part passes every rate.
fn criterion_14() -> Check {
    let two = corpus::two_state(0.5).map_err(|e| e.to_string())?;
    let report = escape_geometric_test(&two, &[0], &[0.25], 64).map_err(|e| e.to_string())?;
    if report.outcomes[0] != EscapeOutcome::Failed {
        return fail(format!(
            "two-state at alpha=0.25: expected Failed, got {:?}",
            report.outcomes[0]
        ));
    }
    let acyclic = FiniteKernel::from_rows(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.9, 0.0, 0.1],
        vec![1.0, 0.0, 0.0],
    ])
    .map_err(|e| e.to_string())?;
    let report =
        escape_geometric_test(&acyclic, &[0], &[0.9, 0.5, 0.1], 64).map_err(|e| e.to_string())?;
    let mut horizons = Vec::new();
    for (alpha, outcome) in report.alphas.iter().zip(&report.outcomes) {
        match outcome {
            EscapeOutcome::PassedAt(n) => horizons.push(*n),
            EscapeOutcome::Failed => {
                return fail(format!("acyclic fixture failed at alpha={alpha}"))
            }
        }
    }
    Ok(format!(
        "two-state fails at alpha=0.25; acyclic fixture passes at horizons {horizons:?}"
    ))
}

/// Hitting-time tail bound: on solved bump-reward instances the return time
/// to the central ball has exponentially decaying tails with the predicted
/// constants.
fn criterion_15() -> Check {
    const MASTER: u64 = 0x1515;
    let mut lambdas = Vec::new();
    for t in 0..5u64 {
        let kernel = dirichlet_kernel(9, MASTER, t);
        let (g, ball) = corpus::bump_reward(9, 4, 2.0, 2.0).map_err(|e| e.to_string())?;
        let sol = solve_mpe(&kernel, g.values(), &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        if sol.status != SolveStatus::Solved {
            return fail(format!("instance {t}: {:?}", sol.status));
        }
        if sol.lambda >= 1.0 {
            return fail(format!("instance {t}: lambda {} >= 1", sol.lambda));
        }
        let prefactor = (2.0 * span_seminorm(&sol.w) + 1.0).exp();
        for x in 0..9 {
            for n in 1..=100usize {
                let tail =
                    taboo_tail(&kernel, &ball, x, n).map_err(|e| e.to_string())?;
                let bound = prefactor * (-(1.0 - sol.lambda) * n as f64).exp() + 1e-10;
                if tail > bound {
                    return fail(format!(
                        "instance {t}, x={x}, n={n}: tail {tail:.3e} above bound {bound:.3e}"
                    ));
                }
            }
        }
        lambdas.push(sol.lambda);
    }
    let lo = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(format!(
        "5 instances solved with lambda in [{lo:.3}, {hi:.3}]; \
         tails below e^(2||w||+1) e^(-(1-lambda)n) for n <= 100"
    ))
}

/// Monte Carlo consistency: the bootstrap error bars cover the exact value
/// for at least 18 of 20 seeds.
fn criterion_16() -> Check {
    let kernel = corpus::cyclic_three();
    let g = uniform_vec(3, -1.0, 1.0, 0x1616, 999);
    let n = 20;
    let exact = risk_sensitive_average(&kernel, &g, 0, n).map_err(|e| e.to_string())?;
    let mut hits = 0u32;
    let mut ratios = Vec::new();
    for seed in 0..20u64 {
        let estimate = mc_entropic_estimate(&kernel, &g, 0, n, 100_000, seed)
            .map_err(|e| e.to_string())?;
        if estimate.sigma <= 0.0 {
            return fail(format!("seed {seed}: degenerate sigma"));
        }
        let pull = (estimate.value - exact).abs() / estimate.sigma;
        ratios.push(pull);
        if pull <= 3.0 {
            hits += 1;
        }
    }
    if hits < 18 {
        return fail(format!(
            "only {hits}/20 seeds within 3 sigma (pulls {ratios:.2?})"
        ));
    }
    let max_pull = ratios.iter().cloned().fold(0.0f64, f64::max);
    Ok(format!(
        "{hits}/20 seeds within 3 bootstrap sigma of the exact average (max pull {max_pull:.2})"
    ))
}
