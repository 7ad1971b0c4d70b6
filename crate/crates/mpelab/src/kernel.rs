//! Finite state spaces, transition kernels, and measure-theoretic helpers.
//!
//! Everything downstream (mixing coefficients, entropic utilities, the
//! multiplicative Poisson solver) works on a [`FiniteKernel`]: a validated
//! row-stochastic matrix over a labelled [`StateSpace`]. This module also
//! provides the small measure toolkit used throughout: distributions,
//! Hahn decompositions and total variation, taboo (first-passage) tails,
//! communicating classes, and invariant measures.

use crate::error::{Error, Result};

/// Tolerance for accepting a row as stochastic: `|sum - 1| <= ROW_SUM_TOL`.
/// Rows within the tolerance are renormalized exactly.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Largest step count accepted by [`FiniteKernel::iterate`].
pub const MAX_ITERATE_STEPS: usize = 1_000_000;

/// Distance structure on a state space.
///
/// `AbsDiff` is the default metric for integer-indexed spaces: the distance
/// between the `i`-th and `j`-th state is `|i - j|` (states are enumerated in
/// label order, so for the canonical labels `"1".."n"` this is the usual
/// absolute difference). `Explicit` carries a full validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// `d(i, j) = |i - j|` on state indices.
    AbsDiff,
    /// Explicit symmetric distance matrix, stored row-major.
    Explicit(Vec<f64>),
}

/// A finite, ordered, labelled state space with an optional metric.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    labels: Vec<String>,
    metric: Metric,
}

impl StateSpace {
    /// Build a space from distinct labels, with the default `AbsDiff` metric.
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::BadParameters("state space must be non-empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(Self {
            labels,
            metric: Metric::AbsDiff,
        })
    }

    /// The canonical integer space `{1, ..., n}` with `AbsDiff` metric.
    pub fn integers(n: usize) -> Self {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Self {
            labels,
            metric: Metric::AbsDiff,
        }
    }

    /// Replace the metric, validating symmetry, nonnegativity, zero diagonal,
    /// and strict positivity off the diagonal for an explicit matrix.
    pub fn with_metric(mut self, metric: Metric) -> Result<Self> {
        if let Metric::Explicit(d) = &metric {
            let n = self.len();
            if d.len() != n * n {
                return Err(Error::DimensionMismatch {
                    left: d.len(),
                    right: n * n,
                });
            }
            for i in 0..n {
                for j in 0..n {
                    let dij = d[i * n + j];
                    if !dij.is_finite() || dij < 0.0 {
                        return Err(Error::BadMetric {
                            property: "nonnegativity",
                            i,
                            j,
                        });
                    }
                    if (dij - d[j * n + i]).abs() > 1e-12 {
                        return Err(Error::BadMetric {
                            property: "symmetry",
                            i,
                            j,
                        });
                    }
                    if i == j && dij != 0.0 {
                        return Err(Error::BadMetric {
                            property: "zero diagonal",
                            i,
                            j,
                        });
                    }
                    if i != j && dij <= 0.0 {
                        return Err(Error::BadMetric {
                            property: "off-diagonal positivity",
                            i,
                            j,
                        });
                    }
                }
            }
        }
        self.metric = metric;
        Ok(self)
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when the space has no states (never, for a validated space).
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label of the `i`-th state.
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// All labels, in order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Distance between the `i`-th and `j`-th state under the space's metric.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.len();
        if i >= n {
            return Err(Error::BadState { index: i, n });
        }
        if j >= n {
            return Err(Error::BadState { index: j, n });
        }
        Ok(match &self.metric {
            Metric::AbsDiff => (i as f64 - j as f64).abs(),
            Metric::Explicit(d) => d[i * n + j],
        })
    }

    /// The metric carried by this space.
    pub fn metric(&self) -> &Metric {
        &self.metric
    }
}

/// A validated probability distribution on a finite state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validate nonnegativity and total mass `1 ± 1e-12`, then renormalize
    /// exactly.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadParameters(
                "distribution must have at least one atom".into(),
            ));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeEntry {
                    row: 0,
                    col: i,
                    value: w,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::NonStochasticRow { row: 0, sum });
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// Build from possibly slightly-noisy nonnegative weights (as produced by
    /// a linear solve): entries in `[-clamp_tol, 0)` are clamped to zero, the
    /// rest must be nonnegative, and the result is renormalized to mass one.
    pub(crate) fn from_unnormalized(mut weights: Vec<f64>, clamp_tol: f64) -> Result<Self> {
        for (i, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() || *w < -clamp_tol {
                return Err(Error::NegativeEntry {
                    row: 0,
                    col: i,
                    value: *w,
                });
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::BadParameters(
                "distribution weights sum to zero".into(),
            ));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// Point mass at state `i` in an `n`-state space.
    pub fn point_mass(i: usize, n: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::BadState { index: i, n });
        }
        let mut weights = vec![0.0; n];
        weights[i] = 1.0;
        Ok(Self { weights })
    }

    /// The weights as a slice.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Never true for a validated distribution.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Expectation of a function given by its value vector.
    pub fn expect(&self, f: &[f64]) -> Result<f64> {
        if f.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                left: f.len(),
                right: self.weights.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(f)
            .map(|(&w, &v)| if w == 0.0 { 0.0 } else { w * v })
            .sum())
    }
}

/// Hahn decomposition of the signed measure `mu - nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnDecomposition {
    /// States where `mu` strictly exceeds `nu`; ties go to the negative set.
    pub positive_set: Vec<usize>,
    /// Total variation distance `sup_B |mu(B) - nu(B)|`.
    pub tv_norm: f64,
}

/// Hahn decomposition of `mu - nu` over a common finite space.
///
/// The positive set is `{i : mu_i > nu_i}` (ties excluded), and the total
/// variation norm is the mass of `mu - nu` on it, which equals
/// `(1/2) * sum_i |mu_i - nu_i|` for probability measures.
pub fn hahn_decomposition(mu: &Distribution, nu: &Distribution) -> Result<HahnDecomposition> {
    if mu.len() != nu.len() {
        return Err(Error::DimensionMismatch {
            left: mu.len(),
            right: nu.len(),
        });
    }
    let mut positive_set = Vec::new();
    let mut tv_norm = 0.0;
    for (i, (&a, &b)) in mu.weights().iter().zip(nu.weights()).enumerate() {
        if a > b {
            positive_set.push(i);
            tv_norm += a - b;
        }
    }
    Ok(HahnDecomposition {
        positive_set,
        tv_norm,
    })
}

/// Total variation distance between two distributions.
pub fn total_variation(mu: &Distribution, nu: &Distribution) -> Result<f64> {
    Ok(hahn_decomposition(mu, nu)?.tv_norm)
}

/// `(1/2) * l1` distance between two same-length nonnegative rows.
pub(crate) fn tv_rows(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs())
        .sum::<f64>()
}

/// Exact boolean support pattern of a kernel power, stored as bitset rows.
///
/// Floating-point powers of a kernel underflow once path probabilities drop
/// below the smallest subnormal, silently turning reachable entries into
/// zeros. Support patterns are combinatorial, so they are computed here with
/// boolean matrix powers instead; see [`FiniteKernel::support_power`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPattern {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl SupportPattern {
    fn empty(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        Self {
            n,
            words_per_row,
            bits: vec![0u64; n * words_per_row],
        }
    }

    fn identity(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.set(i, i);
        }
        s
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1u64 << (j % 64);
    }

    /// Whether entry `(i, j)` is reachable.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] & (1u64 << (j % 64)) != 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Whether all rows have an identical support set.
    pub fn rows_all_equal(&self) -> bool {
        (1..self.n).all(|i| self.row(i) == self.row(0))
    }

    fn multiply(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::empty(n);
        for i in 0..n {
            let (dst, src_rows) = (i * self.words_per_row, &other.bits);
            for k in 0..n {
                if self.get(i, k) {
                    let src = k * self.words_per_row;
                    for w in 0..self.words_per_row {
                        out.bits[dst + w] |= src_rows[src + w];
                    }
                }
            }
        }
        out
    }
}

/// A validated row-stochastic transition matrix over a [`StateSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteKernel {
    space: StateSpace,
    /// Row-major `n * n` transition probabilities.
    rows: Vec<f64>,
    n: usize,
}

impl FiniteKernel {
    /// Validate and build a kernel over an explicit state space.
    ///
    /// Every entry must be finite and nonnegative and every row must sum to
    /// one within [`ROW_SUM_TOL`]; accepted rows are renormalized exactly.
    pub fn build(space: StateSpace, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = space.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                left: rows.len(),
                right: n,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: n,
                });
            }
            for (j, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: p,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NonStochasticRow { row: i, sum });
            }
            let start = flat.len();
            flat.extend(row.iter().map(|&p| p / sum));
            pin_row_sum(&mut flat[start..]);
        }
        Ok(Self {
            space,
            rows: flat,
            n,
        })
    }

    /// Build over the canonical integer space `{1, ..., n}`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let space = StateSpace::integers(rows.len());
        Self::build(space, rows)
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The underlying state space.
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// The `i`-th transition row.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    /// Transition probability `P(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i * self.n + j]
    }

    /// All entries, row-major.
    pub fn entries(&self) -> &[f64] {
        &self.rows
    }

    /// The `n`-step kernel `P^n`, `1 <= n <= `[`MAX_ITERATE_STEPS`].
    ///
    /// Computed by binary exponentiation; after each multiplication the rows
    /// are re-verified stochastic (drift beyond `1e-9` is an error) and
    /// renormalized exactly.
    pub fn iterate(&self, n: usize) -> Result<FiniteKernel> {
        if n == 0 || n > MAX_ITERATE_STEPS {
            return Err(Error::BadParameters(format!(
                "iterate step count must be in 1..={MAX_ITERATE_STEPS}, got {n}"
            )));
        }
        let dim = self.n;
        let mut result: Option<Vec<f64>> = None;
        let mut base = self.rows.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(acc) => renormalized(matmul(&acc, &base, dim), dim)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = renormalized(matmul(&base, &base, dim), dim)?;
        }
        Ok(FiniteKernel {
            space: self.space.clone(),
            rows: result.expect("n >= 1"),
            n: dim,
        })
    }

    /// Exact support pattern of `P^n` via boolean matrix powers.
    pub fn support_power(&self, n: usize) -> Result<SupportPattern> {
        if n == 0 || n > MAX_ITERATE_STEPS {
            return Err(Error::BadParameters(format!(
                "support power step count must be in 1..={MAX_ITERATE_STEPS}, got {n}"
            )));
        }
        let mut base = SupportPattern::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.entry(i, j) > 0.0 {
                    base.set(i, j);
                }
            }
        }
        let mut result = SupportPattern::identity(self.n);
        let mut acc_is_identity = true;
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = if acc_is_identity {
                    acc_is_identity = false;
                    base.clone()
                } else {
                    result.multiply(&base)
                };
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.multiply(&base);
        }
        Ok(result)
    }

    /// Left action `nu P` of the kernel on a row vector.
    pub(crate) fn left_apply(&self, nu: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &w) in nu.iter().enumerate() {
            if w != 0.0 {
                let row = self.row(i);
                for j in 0..n {
                    out[j] += w * row[j];
                }
            }
        }
        out
    }

    /// Right action `P f` of the kernel on a column vector.
    pub(crate) fn right_apply(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(f)
                    .map(|(&p, &v)| if p == 0.0 { 0.0 } else { p * v })
                    .sum()
            })
            .collect()
    }
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        let arow = &a[i * n..(i + 1) * n];
        let crow = &mut c[i * n..(i + 1) * n];
        for (k, &aik) in arow.iter().enumerate() {
            if aik != 0.0 {
                let brow = &b[k * n..(k + 1) * n];
                for j in 0..n {
                    crow[j] += aik * brow[j];
                }
            }
        }
    }
    c
}

fn renormalized(mut m: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for i in 0..n {
        let row = &mut m[i * n..(i + 1) * n];
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::ConvergenceFailure {
                what: "kernel power row normalization",
                residual: (sum - 1.0).abs(),
            });
        }
        for p in row.iter_mut() {
            *p /= sum;
        }
        pin_row_sum(row);
    }
    Ok(m)
}

/// Nudge the largest entry so that the row sums to exactly 1.0 (the residual
/// after a renormalizing division is a few ulps at most).
fn pin_row_sum(row: &mut [f64]) {
    for _ in 0..4 {
        let sum: f64 = row.iter().sum();
        if sum == 1.0 {
            return;
        }
        let mut argmax = 0;
        for (j, &p) in row.iter().enumerate() {
            if p > row[argmax] {
                argmax = j;
            }
        }
        row[argmax] += 1.0 - sum;
    }
}

/// `P_x[tau_B > n]` where `tau_B = inf{ k >= 1 : X_k in B }`.
///
/// The first epoch counted is `k = 1`, so the starting state may lie in `B`
/// without trivializing the tail, and `n = 0` returns `1`.
pub fn taboo_tail(kernel: &FiniteKernel, taboo: &[usize], x: usize, n: usize) -> Result<f64> {
    let size = kernel.n();
    if taboo.is_empty() {
        return Err(Error::EmptyTaboo);
    }
    for &b in taboo {
        if b >= size {
            return Err(Error::BadState { index: b, n: size });
        }
    }
    if x >= size {
        return Err(Error::BadState { index: x, n: size });
    }
    let mut in_taboo = vec![false; size];
    for &b in taboo {
        in_taboo[b] = true;
    }
    // v_k(y) = P_y[X_1, ..., X_k all avoid B], built by backward recursion.
    let mut v = vec![1.0; size];
    for _ in 0..n {
        let mut next = vec![0.0; size];
        for (y, slot) in next.iter_mut().enumerate() {
            let row = kernel.row(y);
            *slot = (0..size)
                .filter(|&z| !in_taboo[z] && row[z] > 0.0)
                .map(|z| row[z] * v[z])
                .sum();
        }
        v = next;
    }
    Ok(v[x])
}

/// A communicating class of a finite kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunicatingClass {
    /// Member states, sorted ascending.
    pub states: Vec<usize>,
    /// True when the class is closed (no transition leaves it), i.e.
    /// recurrent in a finite chain.
    pub recurrent: bool,
}

/// Communicating classes (strongly connected components of the positive
/// transition digraph), sorted by their smallest state index. A class is
/// recurrent exactly when it is closed.
pub fn communicating_classes(kernel: &FiniteKernel) -> Vec<CommunicatingClass> {
    let n = kernel.n();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| kernel.entry(i, j) > 0.0).collect())
        .collect();
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, nbrs) in adjacency.iter().enumerate() {
        for &j in nbrs {
            reverse[j].push(i);
        }
    }

    // First pass: iterative DFS on the forward graph, recording finish order.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // Stack of (node, next neighbour index to explore).
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            if let Some(&next) = adjacency[node].get(*idx) {
                *idx += 1;
                if !visited[next] {
                    visited[next] = true;
                    stack.push((next, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }

    // Second pass: DFS on the reverse graph in reverse finish order.
    let mut component = vec![usize::MAX; n];
    let mut component_count = 0;
    for &start in order.iter().rev() {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = component_count;
        while let Some(node) = stack.pop() {
            for &prev in &reverse[node] {
                if component[prev] == usize::MAX {
                    component[prev] = component_count;
                    stack.push(prev);
                }
            }
        }
        component_count += 1;
    }

    let mut classes: Vec<CommunicatingClass> = (0..component_count)
        .map(|c| {
            let states: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
            let recurrent = states.iter().all(|&i| {
                adjacency[i]
                    .iter()
                    .all(|&j| component[j] == component[i])
            });
            CommunicatingClass { states, recurrent }
        })
        .collect();
    classes.sort_by_key(|c| c.states[0]);
    classes
}

/// The unique invariant measure of a kernel with a single recurrent class.
///
/// For up to 2000 states the stationarity equations are solved directly by
/// LU factorization (with one equation replaced by the normalization); larger
/// kernels fall back to damped power iteration. The result always satisfies
/// `|| nu P - nu ||_var < 1e-12`.
pub fn invariant_measure(kernel: &FiniteKernel) -> Result<Distribution> {
    let n = kernel.n();
    let recurrent_classes = communicating_classes(kernel)
        .into_iter()
        .filter(|c| c.recurrent)
        .count();
    if recurrent_classes != 1 {
        return Err(Error::NonUniqueInvariant {
            classes: recurrent_classes,
        });
    }

    let nu = if n <= 2000 {
        invariant_by_lu(kernel).or_else(|_| invariant_by_power(kernel))?
    } else {
        invariant_by_power(kernel)?
    };

    let image = kernel.left_apply(nu.weights());
    let residual = tv_rows(nu.weights(), &image);
    if residual >= 1e-12 {
        return Err(Error::ConvergenceFailure {
            what: "invariant measure",
            residual,
        });
    }
    Ok(nu)
}

fn invariant_by_lu(kernel: &FiniteKernel) -> Result<Distribution> {
    let n = kernel.n();
    // Solve (P^T - I) nu = 0 with the last equation replaced by sum(nu) = 1.
    // The stationarity equations sum to zero, so dropping one loses nothing,
    // and simplicity of the unit eigenvalue makes the patched system regular.
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = kernel.entry(j, i) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = nalgebra::DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let solution = a.lu().solve(&b).ok_or(Error::ConvergenceFailure {
        what: "invariant measure linear solve",
        residual: f64::NAN,
    })?;
    Distribution::from_unnormalized(solution.iter().copied().collect(), 1e-9)
}

fn invariant_by_power(kernel: &FiniteKernel) -> Result<Distribution> {
    let n = kernel.n();
    let mut nu = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATE_STEPS {
        // Damped update nu <- nu (I + P) / 2 suppresses periodic cycling.
        let image = kernel.left_apply(&nu);
        let mut next: Vec<f64> = nu
            .iter()
            .zip(&image)
            .map(|(&a, &b)| 0.5 * (a + b))
            .collect();
        let total: f64 = next.iter().sum();
        for w in &mut next {
            *w /= total;
        }
        residual = tv_rows(&nu, &next);
        nu = next;
        if residual < 1e-15 {
            break;
        }
    }
    if residual >= 1e-15 {
        return Err(Error::ConvergenceFailure {
            what: "invariant measure power iteration",
            residual,
        });
    }
    Distribution::from_unnormalized(nu, 1e-9)
}
