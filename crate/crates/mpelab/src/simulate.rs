//! Path sampling, Monte Carlo estimation of entropic averages, exact
//! partial-sum laws on lattices, and first-order stochastic dominance.
//!
//! Randomness comes from a small counter-based generator built on the
//! splitmix64 finalizer: every draw is a pure function of (master seed,
//! stream index, counter), so path `i` of a batch is reproducible in
//! isolation and bootstrap resamples use disjoint streams by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

/// Name of the generator, recorded in every sampling artifact.
pub const RNG_ALGORITHM: &str = "splitmix64-counter";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer: a bijective avalanche mix on 64 bits.
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// One independent stream of a counter-based generator: draw `k` of stream
/// `s` under master seed `m` is `mix(key(m, s) + k * GOLDEN)`.
#[derive(Debug, Clone)]
pub struct Substream {
    key: u64,
    counter: u64,
}

impl Substream {
    /// Open stream `stream` under `master_seed`.
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let key = mix(
            mix(master_seed ^ 0xA076_1D64_78BD_642F)
                ^ mix(stream ^ 0xE703_7ED1_A0B4_28DB),
        );
        Self { key, counter: 0 }
    }

    /// Next 64 uniform bits.
    pub fn next_u64(&mut self) -> u64 {
        let value = mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        value
    }

    /// Next uniform double in `[0, 1)` (53 bits of precision).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Next index uniform on `0..bound` (modulo reduction; the bias is below
    /// `bound / 2^64` and irrelevant at the sizes used here).
    pub fn next_index(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// A batch of sampled trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBatch {
    /// Number of states of the generating kernel (for validation).
    n_states: usize,
    /// Common start state.
    pub start: usize,
    /// Master seed; path `i` used stream `i`.
    pub seed: u64,
    /// `states[i]` is path `i`: `horizon + 1` states including the start.
    pub states: Vec<Vec<usize>>,
}

impl PathBatch {
    /// Number of paths.
    pub fn m(&self) -> usize {
        self.states.len()
    }

    /// Number of transitions per path.
    pub fn horizon(&self) -> usize {
        self.states[0].len() - 1
    }

    /// Partial sums `S_n(i) = g(x_0) + ... + g(x_{n-1})` along each path:
    /// the first `horizon` states, final state excluded.
    pub fn reward_sums(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.n_states {
            return Err(Error::DimensionMismatch {
                left: g.len(),
                right: self.n_states,
            });
        }
        let n = self.horizon();
        Ok(self
            .states
            .iter()
            .map(|path| path[..n].iter().map(|&x| g[x]).sum())
            .collect())
    }
}

/// Sample `m` independent paths of `n` transitions from `start`, by inverse
/// CDF on each row. Path `i` is a pure function of `(seed, i)`.
pub fn sample_paths(
    kernel: &FiniteKernel,
    start: usize,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<PathBatch> {
    let dim = kernel.n();
    if start >= dim {
        return Err(Error::BadState {
            index: start,
            n: dim,
        });
    }
    if n == 0 || m == 0 {
        return Err(Error::BadParameters(
            "need at least one transition and one path".into(),
        ));
    }
    let mut states = Vec::with_capacity(m);
    for i in 0..m {
        let mut stream = Substream::new(seed, i as u64);
        let mut path = Vec::with_capacity(n + 1);
        let mut x = start;
        path.push(x);
        for _ in 0..n {
            x = step(kernel.row(x), stream.next_f64());
            path.push(x);
        }
        states.push(path);
    }
    Ok(PathBatch {
        n_states: dim,
        start,
        seed,
        states,
    })
}

/// Inverse-CDF draw from one stochastic row.
fn step(row: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (y, &p) in row.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cumulative += p;
        last_positive = y;
        if u < cumulative {
            return y;
        }
    }
    // Round-off left the cumulative just under u: the draw is the final
    // supported state.
    last_positive
}

/// Monte Carlo estimate of an entropic average, with bootstrap error bars.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    /// Estimate of `(1/n) ln E[e^{S_n}]` via log-mean-exp over paths.
    pub value: f64,
    /// Standard deviation of the bootstrap resample estimates.
    pub sigma: f64,
    /// 2.5th percentile of the bootstrap resamples.
    pub ci_low: f64,
    /// 97.5th percentile of the bootstrap resamples.
    pub ci_high: f64,
    /// Horizon `n`.
    pub horizon: usize,
    /// Number of paths `m`.
    pub paths: usize,
    /// Master seed.
    pub seed: u64,
    /// Generator identifier.
    pub rng_algorithm: &'static str,
}

const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Estimate `(1/n) ln E_x[e^{S_n}]` from `m` sampled paths, with a
/// 1000-resample bootstrap for `sigma` and the 95% percentile interval.
/// Paths use streams `0..m`; resample `b` uses stream `m + b`, so estimates
/// are reproducible and streams never collide.
pub fn mc_entropic_estimate(
    kernel: &FiniteKernel,
    g: &[f64],
    start: usize,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<McEstimate> {
    if m < 2 {
        return Err(Error::BadParameters(
            "bootstrap needs at least two paths".into(),
        ));
    }
    let batch = sample_paths(kernel, start, n, m, seed)?;
    let sums = batch.reward_sums(g)?;
    let value = log_mean_exp(&sums) / n as f64;

    let mut resamples = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut picked = vec![0.0f64; m];
    for b in 0..BOOTSTRAP_RESAMPLES {
        let mut stream = Substream::new(seed, (m + b) as u64);
        for slot in picked.iter_mut() {
            *slot = sums[stream.next_index(m)];
        }
        resamples.push(log_mean_exp(&picked) / n as f64);
    }
    resamples.sort_by(|a, b| a.partial_cmp(b).expect("finite resamples"));
    let mean = resamples.iter().sum::<f64>() / resamples.len() as f64;
    let var = resamples
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (resamples.len() - 1) as f64;
    let ci_low = resamples[(0.025 * BOOTSTRAP_RESAMPLES as f64) as usize];
    let ci_high = resamples[(0.975 * BOOTSTRAP_RESAMPLES as f64) as usize - 1];
    Ok(McEstimate {
        value,
        sigma: var.sqrt(),
        ci_low,
        ci_high,
        horizon: n,
        paths: m,
        seed,
        rng_algorithm: RNG_ALGORITHM,
    })
}

/// `ln((1/m) sum e^{s_i})`, stabilized by the maximum.
fn log_mean_exp(samples: &[f64]) -> f64 {
    let peak = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = samples.iter().map(|&s| (s - peak).exp()).sum();
    peak + (sum / samples.len() as f64).ln()
}

/// A probability law supported on the lattice `offset + k * delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDistribution {
    /// Smallest attained value.
    pub offset: f64,
    /// Lattice spacing; `0` only for a point mass.
    pub delta: f64,
    /// `probabilities[k] = P[S = offset + k * delta]`; first and last entries
    /// are positive, interior zeros are kept.
    pub probabilities: Vec<f64>,
}

impl LatticeDistribution {
    /// The lattice points, in increasing order.
    pub fn values(&self) -> Vec<f64> {
        (0..self.probabilities.len())
            .map(|k| self.offset + k as f64 * self.delta)
            .collect()
    }

    /// Mean of the law.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| p * (self.offset + k as f64 * self.delta))
            .sum()
    }

    /// Total mass (1 up to round-off; exposed for sanity checks).
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

const LATTICE_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: u64 = 1_000_000;
const MAX_LATTICE_LEN: usize = 10_000_000;

/// Exact law of the partial sum `S_n = g(x_0) + ... + g(x_{n-1})` from a
/// given start state, by dynamic programming on the reward lattice.
///
/// The reward values must be commensurable: every difference must be an
/// integer multiple of a common spacing, recovered by continued-fraction
/// approximation with denominators up to 10^6 and relative tolerance 1e-9.
/// Incommensurable rewards are rejected with `NonLatticeReward`, and lattices
/// longer than 10^7 points with `BadParameters`.
pub fn partial_sum_distribution(
    kernel: &FiniteKernel,
    g: &[f64],
    start: usize,
    n: usize,
) -> Result<LatticeDistribution> {
    let dim = kernel.n();
    if g.len() != dim {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: dim,
        });
    }
    if start >= dim {
        return Err(Error::BadState {
            index: start,
            n: dim,
        });
    }
    if n == 0 {
        return Err(Error::BadParameters("horizon n must be at least 1".into()));
    }

    let (base, delta, indices) = reward_lattice(g)?;
    if delta == 0.0 {
        // Constant reward: S_n is deterministic.
        return Ok(LatticeDistribution {
            offset: n as f64 * base,
            delta: 0.0,
            probabilities: vec![1.0],
        });
    }
    let k_max = *indices.iter().max().expect("non-empty reward");
    let lattice_len = n
        .checked_mul(k_max)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::BadParameters("lattice length overflows".into()))?;
    if lattice_len > MAX_LATTICE_LEN {
        return Err(Error::BadParameters(format!(
            "lattice of {lattice_len} points exceeds the 10^7 cap"
        )));
    }

    // joint[x][s] = P[x_t = x, accumulated index = s] where the accumulated
    // index counts the reward terms at times 0..=t.
    let mut joint = vec![vec![0.0f64; lattice_len]; dim];
    joint[start][indices[start]] = 1.0;
    for _ in 1..n {
        let mut next = vec![vec![0.0f64; lattice_len]; dim];
        for x in 0..dim {
            let row = kernel.row(x);
            for s in 0..lattice_len {
                let mass = joint[x][s];
                if mass == 0.0 {
                    continue;
                }
                for (y, &p) in row.iter().enumerate() {
                    if p > 0.0 {
                        next[y][s + indices[y]] += mass * p;
                    }
                }
            }
        }
        joint = next;
    }
    let mut law = vec![0.0f64; lattice_len];
    for row in &joint {
        for (s, &mass) in row.iter().enumerate() {
            law[s] += mass;
        }
    }

    let first = law
        .iter()
        .position(|&p| p > 0.0)
        .ok_or(Error::ConvergenceFailure {
            what: "partial-sum mass vanished",
            residual: 0.0,
        })?;
    let last = law.iter().rposition(|&p| p > 0.0).expect("mass exists");
    Ok(LatticeDistribution {
        offset: n as f64 * base + first as f64 * delta,
        delta,
        probabilities: law[first..=last].to_vec(),
    })
}

/// Recover the reward lattice: returns `(base, delta, indices)` with
/// `g(x) = base + indices[x] * delta`. A constant reward returns `delta = 0`
/// with all indices 0.
fn reward_lattice(g: &[f64]) -> Result<(f64, f64, Vec<usize>)> {
    let base = g.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = g
        .iter()
        .map(|&v| (v - base).abs())
        .fold(1.0f64, f64::max);
    let diffs: Vec<f64> = g.iter().map(|&v| v - base).collect();
    let positive: Vec<f64> = diffs
        .iter()
        .cloned()
        .filter(|&d| d > LATTICE_TOL * scale)
        .collect();
    if positive.is_empty() {
        return Ok((base, 0.0, vec![0; g.len()]));
    }
    let d_min = positive.iter().cloned().fold(f64::INFINITY, f64::min);

    // delta = d_min / lcm of the denominators of the ratios d_i / d_min.
    let mut lcm_value: u64 = 1;
    for &d in &positive {
        let ratio = d / d_min;
        let (_, q) =
            rational_approximation(ratio, MAX_DENOMINATOR, LATTICE_TOL).ok_or_else(|| {
                Error::NonLatticeReward {
                    reason: format!(
                        "difference ratio {ratio} has no rational approximation with \
                         denominator <= {MAX_DENOMINATOR}"
                    ),
                }
            })?;
        lcm_value = lcm(lcm_value, q).ok_or_else(|| Error::NonLatticeReward {
            reason: "common lattice denominator overflows".into(),
        })?;
        if lcm_value > MAX_DENOMINATOR {
            return Err(Error::NonLatticeReward {
                reason: format!(
                    "common lattice denominator {lcm_value} exceeds {MAX_DENOMINATOR}"
                ),
            });
        }
    }
    let delta = d_min / lcm_value as f64;

    let mut indices = Vec::with_capacity(g.len());
    for &d in &diffs {
        if d <= LATTICE_TOL * scale {
            indices.push(0);
            continue;
        }
        let ratio = d / delta;
        let k = ratio.round();
        if (ratio - k).abs() > LATTICE_TOL * ratio.max(1.0) {
            return Err(Error::NonLatticeReward {
                reason: format!("difference {d} is not a multiple of the spacing {delta}"),
            });
        }
        indices.push(k as usize);
    }
    Ok((base, delta, indices))
}

/// Best rational approximation `p/q` of `x >= 1` by continued fractions,
/// with `q <= max_q` and relative error at most `tol`.
fn rational_approximation(x: f64, max_q: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p_cur, mut q_cur) = (x.floor() as u64, 1u64);
    let mut remainder = x - x.floor();
    for _ in 0..64 {
        if (x - p_cur as f64 / q_cur as f64).abs() <= tol * x.max(1.0) {
            return Some((p_cur, q_cur));
        }
        if remainder.abs() < f64::MIN_POSITIVE {
            break;
        }
        let flipped = 1.0 / remainder;
        let digit = flipped.floor();
        remainder = flipped - digit;
        let a = digit as u64;
        let p_next = a.checked_mul(p_cur)?.checked_add(p_prev)?;
        let q_next = a.checked_mul(q_cur)?.checked_add(q_prev)?;
        if q_next > max_q {
            return None;
        }
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p_next, q_next);
    }
    if (x - p_cur as f64 / q_cur as f64).abs() <= tol * x.max(1.0) {
        Some((p_cur, q_cur))
    } else {
        None
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// First-order stochastic dominance verdict for a pair `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dominance {
    /// `A` first-order dominates `B`: `F_A <= F_B` pointwise, strictly
    /// somewhere.
    Dominates,
    /// `B` first-order dominates `A`.
    DominatedBy,
    /// The CDFs cross.
    Incomparable,
    /// The CDFs agree everywhere (within round-off).
    Equal,
}

const CDF_TOL: f64 = 1e-12;

/// Compare two lattice laws in first-order stochastic dominance, merging
/// supports (values within 1e-9 relative are identified) and comparing CDFs
/// with 1e-12 slack.
pub fn stochastic_dominance(a: &LatticeDistribution, b: &LatticeDistribution) -> Dominance {
    // Merge the two supports into a common increasing grid.
    let mut points: Vec<(f64, f64, f64)> = Vec::new();
    for (v, p) in a.values().into_iter().zip(a.probabilities.iter()) {
        if *p > 0.0 {
            points.push((v, *p, 0.0));
        }
    }
    for (v, p) in b.values().into_iter().zip(b.probabilities.iter()) {
        if *p > 0.0 {
            points.push((v, 0.0, *p));
        }
    }
    points.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite lattice values"));
    let mut merged: Vec<(f64, f64, f64)> = Vec::new();
    for (v, pa, pb) in points {
        match merged.last_mut() {
            Some(last) if (v - last.0).abs() <= LATTICE_TOL * v.abs().max(1.0) => {
                last.1 += pa;
                last.2 += pb;
            }
            _ => merged.push((v, pa, pb)),
        }
    }

    let mut cdf_a = 0.0;
    let mut cdf_b = 0.0;
    let mut a_below = false; // F_A < F_B somewhere
    let mut b_below = false; // F_B < F_A somewhere
    for (i, &(_, pa, pb)) in merged.iter().enumerate() {
        cdf_a += pa;
        cdf_b += pb;
        if i + 1 == merged.len() {
            break; // both CDFs are 1 at the top of the merged support
        }
        if cdf_a < cdf_b - CDF_TOL {
            a_below = true;
        }
        if cdf_b < cdf_a - CDF_TOL {
            b_below = true;
        }
    }
    match (a_below, b_below) {
        (true, true) => Dominance::Incomparable,
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        (false, false) => Dominance::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_state() -> FiniteKernel {
        FiniteKernel::from_rows(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap()
    }

    #[test]
    fn rng_is_deterministic_per_stream() {
        let a: Vec<u64> = {
            let mut s = Substream::new(42, 7);
            (0..5).map(|_| s.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut s = Substream::new(42, 7);
            (0..5).map(|_| s.next_u64()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u64> = {
            let mut s = Substream::new(42, 8);
            (0..5).map(|_| s.next_u64()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn rng_uniform_mean() {
        let mut s = Substream::new(1, 0);
        let m = 10_000;
        let mean: f64 = (0..m).map(|_| s.next_f64()).sum::<f64>() / m as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn paths_respect_the_kernel() {
        let k = two_state();
        let batch = sample_paths(&k, 1, 1, 20_000, 3).unwrap();
        let left: usize = batch.states.iter().filter(|p| p[1] == 0).count();
        let frac = left as f64 / 20_000.0;
        assert!((frac - 0.5).abs() < 0.02, "fraction {frac}");
        // Absorbing start never moves.
        let stuck = sample_paths(&k, 0, 5, 50, 3).unwrap();
        assert!(stuck.states.iter().all(|p| p.iter().all(|&x| x == 0)));
    }

    #[test]
    fn reward_sums_exclude_final_state() {
        let flip = FiniteKernel::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let batch = sample_paths(&flip, 0, 3, 4, 9).unwrap();
        // Path is 0,1,0,1 deterministically; sum over times 0..2 with
        // g = (1, 10) is 1 + 10 + 1 = 12.
        for s in batch.reward_sums(&[1.0, 10.0]).unwrap() {
            assert_abs_diff_eq!(s, 12.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mc_estimate_is_exact_at_horizon_one() {
        // S_1 = g(start) is deterministic, so the estimate has zero spread.
        let k = two_state();
        let g = [0.0, 0.7];
        let est = mc_entropic_estimate(&k, &g, 1, 1, 100, 5).unwrap();
        assert_abs_diff_eq!(est.value, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(est.sigma, 0.0, epsilon = 1e-12);
        assert_eq!(est.rng_algorithm, RNG_ALGORITHM);
    }

    #[test]
    fn mc_estimate_brackets_the_exact_average() {
        use crate::ergodic::risk_sensitive_average;
        let k = two_state();
        let g = [0.0, 1.5f64.ln()];
        let exact = risk_sensitive_average(&k, &g, 1, 10).unwrap();
        let est = mc_entropic_estimate(&k, &g, 1, 10, 50_000, 11).unwrap();
        assert!(
            (est.value - exact).abs() < 5.0 * est.sigma.max(1e-6),
            "estimate {} exact {exact} sigma {}",
            est.value,
            est.sigma
        );
        assert!(est.ci_low <= est.value && est.value <= est.ci_high);
    }

    #[test]
    fn partial_sum_law_two_state() {
        let k = two_state();
        let law = partial_sum_distribution(&k, &[0.0, 1.0], 1, 2).unwrap();
        assert_abs_diff_eq!(law.offset, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(law.delta, 1.0, epsilon = 1e-12);
        assert_eq!(law.probabilities.len(), 2);
        assert_abs_diff_eq!(law.probabilities[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(law.probabilities[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn partial_sum_matches_entropic_average() {
        use crate::ergodic::risk_sensitive_average;
        let k = two_state();
        let g = [0.0, 1.5f64.ln()];
        let n = 6;
        let law = partial_sum_distribution(&k, &g, 1, n).unwrap();
        assert_abs_diff_eq!(law.total(), 1.0, epsilon = 1e-12);
        // (1/n) ln E e^{S_n} computed from the exact law.
        let direct = law
            .values()
            .iter()
            .zip(&law.probabilities)
            .map(|(&v, &p)| p * v.exp())
            .sum::<f64>()
            .ln()
            / n as f64;
        let exact = risk_sensitive_average(&k, &g, 1, n).unwrap();
        assert_abs_diff_eq!(direct, exact, epsilon = 1e-12);
    }

    #[test]
    fn lattice_with_rational_ratio() {
        // Differences 1/3 and 1/2: spacing 1/6.
        let (base, delta, indices) = reward_lattice(&[0.0, 1.0 / 3.0, 0.5]).unwrap();
        assert_abs_diff_eq!(base, 0.0);
        assert_abs_diff_eq!(delta, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(indices, vec![0, 2, 3]);
    }

    #[test]
    fn constant_reward_is_a_point_mass() {
        let k = two_state();
        let law = partial_sum_distribution(&k, &[2.5, 2.5], 1, 4).unwrap();
        assert_eq!(law.probabilities, vec![1.0]);
        assert_abs_diff_eq!(law.offset, 10.0, epsilon = 1e-12);
        assert_eq!(law.delta, 0.0);
    }

    #[test]
    fn incommensurable_reward_is_rejected() {
        // The true spacing would need denominator 10^7, beyond the cap.
        let result = reward_lattice(&[0.0, 1.0, 1.0 + 1e-7]);
        assert!(matches!(result, Err(Error::NonLatticeReward { .. })));
    }

    #[test]
    fn dominance_verdicts() {
        let point = |v: f64| LatticeDistribution {
            offset: v,
            delta: 0.0,
            probabilities: vec![1.0],
        };
        assert_eq!(stochastic_dominance(&point(2.0), &point(1.0)), Dominance::Dominates);
        assert_eq!(
            stochastic_dominance(&point(1.0), &point(2.0)),
            Dominance::DominatedBy
        );
        assert_eq!(stochastic_dominance(&point(1.0), &point(1.0)), Dominance::Equal);

        let spread = LatticeDistribution {
            offset: 0.0,
            delta: 10.0,
            probabilities: vec![0.5, 0.5],
        };
        // Mean 5 versus a point at 1: the CDFs cross.
        assert_eq!(
            stochastic_dominance(&spread, &point(1.0)),
            Dominance::Incomparable
        );
    }

    #[test]
    fn dominance_merges_nearby_values() {
        let a = LatticeDistribution {
            offset: 0.0,
            delta: 1.0,
            probabilities: vec![0.5, 0.5],
        };
        let b = LatticeDistribution {
            offset: 5e-10,
            delta: 1.0,
            probabilities: vec![0.5, 0.5],
        };
        assert_eq!(stochastic_dominance(&a, &b), Dominance::Equal);
    }

    #[test]
    fn dominance_shifted_law_dominates() {
        let a = LatticeDistribution {
            offset: 1.0,
            delta: 1.0,
            probabilities: vec![0.5, 0.5],
        };
        let b = LatticeDistribution {
            offset: 0.0,
            delta: 1.0,
            probabilities: vec![0.5, 0.5],
        };
        assert_eq!(stochastic_dominance(&a, &b), Dominance::Dominates);
        assert_eq!(stochastic_dominance(&b, &a), Dominance::DominatedBy);
    }
}
