//! Python extension module `_mpelab`: the kernel type, the solvers, the
//! mixing diagnostics, and the Monte Carlo machinery, with plain dicts and
//! lists at the boundary.

use mpelab as core;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn pyerr(e: core::Error) -> PyErr {
    match e {
        core::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A finite row-stochastic transition kernel.
#[pyclass(frozen, module = "_mpelab")]
struct Kernel {
    inner: core::FiniteKernel,
}

impl Kernel {
    fn wrap(inner: core::FiniteKernel) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl Kernel {
    /// Build from a row-stochastic matrix (rows are renormalized when they
    /// are off by a rounding error; a genuinely deficient row is an error).
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        core::FiniteKernel::from_rows(rows)
            .map(Self::wrap)
            .map_err(pyerr)
    }

    /// Load from a `.json` kernel file or a headerless `.csv` matrix.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        core::io::load_kernel(path).map(Self::wrap).map_err(pyerr)
    }

    /// Two states: the first absorbing, the second holding with probability
    /// `lam`.
    #[staticmethod]
    fn two_state(lam: f64) -> PyResult<Self> {
        core::corpus::two_state(lam).map(Self::wrap).map_err(pyerr)
    }

    /// Three states hopping uniformly to the other two.
    #[staticmethod]
    fn cyclic_three() -> Self {
        Self::wrap(core::corpus::cyclic_three())
    }

    /// Truncated shift chain with geometrically shrinking advance
    /// probabilities.
    #[staticmethod]
    fn shift_chain(n: usize) -> PyResult<Self> {
        core::corpus::shift_chain(n)
            .map(|c| Self::wrap(c.kernel))
            .map_err(pyerr)
    }

    /// Truncated shift chain that advances or resets with probability 1/2.
    #[staticmethod]
    fn full_support_shift(n: usize) -> PyResult<Self> {
        core::corpus::full_support_shift(n)
            .map(|c| Self::wrap(c.kernel))
            .map_err(pyerr)
    }

    /// Truncated birth-reset chain whose closed form the tests pin down.
    #[staticmethod]
    fn recurrent_shift(n: usize) -> PyResult<Self> {
        core::corpus::recurrent_shift(n)
            .map(|c| Self::wrap(c.kernel))
            .map_err(pyerr)
    }

    /// Truncated chain returning home with state-dependent geometric tails.
    #[staticmethod]
    fn local_geometric(n: usize) -> PyResult<Self> {
        core::corpus::local_geometric(n, None)
            .map(|c| Self::wrap(c.kernel))
            .map_err(pyerr)
    }

    /// Number of states.
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    /// One transition row.
    fn row(&self, x: usize) -> PyResult<Vec<f64>> {
        if x >= self.inner.n() {
            return Err(PyValueError::new_err(format!(
                "state index {x} out of range for {} states",
                self.inner.n()
            )));
        }
        Ok(self.inner.row(x).to_vec())
    }

    /// Single transition probability.
    fn entry(&self, x: usize, y: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if x >= n || y >= n {
            return Err(PyValueError::new_err(format!(
                "entry ({x}, {y}) out of range for {n} states"
            )));
        }
        Ok(self.inner.entry(x, y))
    }

    /// The full matrix as a list of rows.
    fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.inner.n())
            .map(|x| self.inner.row(x).to_vec())
            .collect()
    }

    /// `n`-step Dobrushin contraction coefficient.
    fn dobrushin(&self, n: usize) -> PyResult<f64> {
        core::dobrushin_coefficient(&self.inner, n).map_err(pyerr)
    }

    /// Maximal `n`-step minorization constant, with the minorizing
    /// distribution when the constant is positive.
    fn minorization(&self, n: usize) -> PyResult<(f64, Option<Vec<f64>>)> {
        core::minorization(&self.inner, n)
            .map(|(d, eta)| (d, eta.map(|e| e.weights().to_vec())))
            .map_err(pyerr)
    }

    /// `n`-step strong mixing ratio; `inf` when some transition density is
    /// unbounded (support mismatch).
    fn strong_ratio(&self, n: usize) -> PyResult<f64> {
        core::strong_mixing_ratio(&self.inner, n).map_err(pyerr)
    }

    /// Save as `.json` or headerless `.csv`.
    fn save(&self, path: &str) -> PyResult<()> {
        core::io::save_kernel(path, &self.inner).map_err(pyerr)
    }

    fn __repr__(&self) -> String {
        format!("Kernel(n={})", self.inner.n())
    }
}

fn solution_dict<'py>(py: Python<'py>, sol: &core::MpeSolution) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("w", sol.w.clone())?;
    d.set_item("lambda", sol.lambda)?;
    d.set_item("residual", sol.residual)?;
    d.set_item("status", format!("{:?}", sol.status))?;
    d.set_item("iterations", sol.iterations())?;
    d.set_item("trace", sol.trace.clone())?;
    Ok(d)
}

/// Iterate the multiplicative operator; returns a dict with `w`, `lambda`,
/// `residual`, `status` (`"Solved"`, `"Diverged"`, or `"Inconclusive"`),
/// `iterations`, and the per-iteration span `trace`.
#[pyfunction]
#[pyo3(signature = (kernel, g, *, tol = 1e-10, max_iter = 100_000, span_cap = 1e4, anchor = None))]
fn solve<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    g: Vec<f64>,
    tol: f64,
    max_iter: usize,
    span_cap: f64,
    anchor: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = core::SolveOptions {
        tol,
        max_iter,
        span_cap,
        anchor,
    };
    let sol = core::solve_mpe(&kernel.inner, &g, &opts).map_err(pyerr)?;
    solution_dict(py, &sol)
}

/// Solve the additive Poisson equation; returns a dict with `w0`,
/// `lambda0`, and `residual`.
#[pyfunction]
#[pyo3(signature = (kernel, g, anchor = None))]
fn solve_additive<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    g: Vec<f64>,
    anchor: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let sol = core::solve_ape(&kernel.inner, &g, anchor).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("w0", sol.w0)?;
    d.set_item("lambda0", sol.lambda0)?;
    d.set_item("residual", sol.residual)?;
    Ok(d)
}

/// Largest reward span for which a one-step contraction coefficient `lam`
/// guarantees a bounded solution: `-ln(sqrt(lam))`.
#[pyfunction]
fn sharp_bound(lam: f64) -> PyResult<f64> {
    core::sharp_bound(lam).map_err(pyerr)
}

/// Smallest step count at which the span test certifies existence, or
/// `None` when no tested step count does.
#[pyfunction]
#[pyo3(signature = (kernel, g, n_max = 8))]
fn guaranteed_existence(kernel: &Kernel, g: Vec<f64>, n_max: usize) -> PyResult<Option<usize>> {
    core::guaranteed_existence(&kernel.inner, &g, n_max)
        .map(|verdict| match verdict {
            core::ExistenceVerdict::GuaranteedByBound(n) => Some(n),
            core::ExistenceVerdict::NoGuarantee => None,
        })
        .map_err(pyerr)
}

/// Classify the kernel: dict with `verdict` in `{"AllG", "NotAllG",
/// "Unknown"}` and, for `NotAllG`, the divergence `witness` reward.
#[pyfunction]
fn classify<'py>(py: Python<'py>, kernel: &Kernel) -> PyResult<Bound<'py, PyDict>> {
    let verdict = core::finite_existence_classifier(&kernel.inner).map_err(pyerr)?;
    let d = PyDict::new(py);
    match verdict {
        core::Classification::AllG => {
            d.set_item("verdict", "AllG")?;
            d.set_item("witness", py.None())?;
        }
        core::Classification::NotAllG { witness } => {
            d.set_item("verdict", "NotAllG")?;
            d.set_item("witness", witness.values().to_vec())?;
        }
        core::Classification::Unknown => {
            d.set_item("verdict", "Unknown")?;
            d.set_item("witness", py.None())?;
        }
    }
    Ok(d)
}

/// Finite-horizon entropic average `T^n 0(start) / n`.
#[pyfunction]
fn average(kernel: &Kernel, g: Vec<f64>, start: usize, n: usize) -> PyResult<f64> {
    core::risk_sensitive_average(&kernel.inner, &g, start, n).map_err(pyerr)
}

/// The averages for every horizon `1..=n_max` in one sweep.
#[pyfunction]
fn average_trace(kernel: &Kernel, g: Vec<f64>, start: usize, n_max: usize) -> PyResult<Vec<f64>> {
    core::average_trace(&kernel.inner, &g, start, n_max)
        .map(|t| t.values)
        .map_err(pyerr)
}

/// `P_x[tau_B > n]` for the taboo set `B` (first epoch counted is 1).
#[pyfunction]
fn taboo_tail(kernel: &Kernel, taboo: Vec<usize>, x: usize, n: usize) -> PyResult<f64> {
    core::taboo_tail(&kernel.inner, &taboo, x, n).map_err(pyerr)
}

/// Geometric-escape test: dict with `alphas`, `passed_at` (horizon per rate,
/// `None` where the rate fails), and `vacuous`.
#[pyfunction]
#[pyo3(signature = (kernel, support, alphas, n_max = 64))]
fn escape_test<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    support: Vec<usize>,
    alphas: Vec<f64>,
    n_max: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let report =
        core::escape_geometric_test(&kernel.inner, &support, &alphas, n_max).map_err(pyerr)?;
    let passed_at: Vec<Option<usize>> = report
        .outcomes
        .iter()
        .map(|o| match o {
            core::EscapeOutcome::PassedAt(n) => Some(*n),
            core::EscapeOutcome::Failed => None,
        })
        .collect();
    let d = PyDict::new(py);
    d.set_item("alphas", report.alphas)?;
    d.set_item("passed_at", passed_at)?;
    d.set_item("vacuous", report.vacuous)?;
    Ok(d)
}

/// Exact law of the number of visits to `targets` during epochs `1..=n`.
#[pyfunction]
fn visit_counts(kernel: &Kernel, start: usize, targets: Vec<usize>, n: usize) -> PyResult<Vec<f64>> {
    core::visit_count_tail(&kernel.inner, start, &targets, n).map_err(pyerr)
}

/// Sample `paths` reward paths of `horizon` transitions; returns the state
/// sequences as lists of length `horizon + 1`.
#[pyfunction]
fn sample_paths(
    kernel: &Kernel,
    start: usize,
    horizon: usize,
    paths: usize,
    seed: u64,
) -> PyResult<Vec<Vec<usize>>> {
    core::sample_paths(&kernel.inner, start, horizon, paths, seed)
        .map(|batch| batch.states)
        .map_err(pyerr)
}

/// Monte Carlo entropic estimate with bootstrap error bars: dict with
/// `value`, `sigma`, `ci_low`, `ci_high`, `horizon`, `paths`, `seed`, and
/// `rng_algorithm`.
#[pyfunction]
fn simulate<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    g: Vec<f64>,
    start: usize,
    horizon: usize,
    paths: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let est =
        core::mc_entropic_estimate(&kernel.inner, &g, start, horizon, paths, seed).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("value", est.value)?;
    d.set_item("sigma", est.sigma)?;
    d.set_item("ci_low", est.ci_low)?;
    d.set_item("ci_high", est.ci_high)?;
    d.set_item("horizon", est.horizon)?;
    d.set_item("paths", est.paths)?;
    d.set_item("seed", est.seed)?;
    d.set_item("rng_algorithm", est.rng_algorithm)?;
    Ok(d)
}

/// Exact lattice law of the `n`-term reward sum from `start`: dict with
/// `offset`, `delta`, `probabilities`, `values`, and `mean`.
#[pyfunction]
fn partial_sum_law<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    g: Vec<f64>,
    start: usize,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let law = core::partial_sum_distribution(&kernel.inner, &g, start, n).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("offset", law.offset)?;
    d.set_item("delta", law.delta)?;
    d.set_item("values", law.values())?;
    d.set_item("mean", law.mean())?;
    d.set_item("probabilities", law.probabilities)?;
    Ok(d)
}

/// First-order stochastic dominance between the `n`-term reward-sum laws of
/// `g1` and `g2`: `"Dominates"`, `"DominatedBy"`, `"Equal"`, or
/// `"Incomparable"`.
#[pyfunction]
fn dominance(
    kernel: &Kernel,
    g1: Vec<f64>,
    g2: Vec<f64>,
    start: usize,
    n: usize,
) -> PyResult<String> {
    let a = core::partial_sum_distribution(&kernel.inner, &g1, start, n).map_err(pyerr)?;
    let b = core::partial_sum_distribution(&kernel.inner, &g2, start, n).map_err(pyerr)?;
    Ok(format!("{:?}", core::stochastic_dominance(&a, &b)))
}

/// Alternating reward paying `k` on every other spine state.
#[pyfunction]
fn period_two_reward(n: usize, k: f64) -> PyResult<Vec<f64>> {
    core::corpus::period_two_reward(n, k)
        .map(|r| r.values().to_vec())
        .map_err(pyerr)
}

/// Dyadic half-block reward paying `high` on the upper half of each block.
#[pyfunction]
fn block_reward(n: usize, high: f64) -> PyResult<Vec<f64>> {
    core::corpus::block_reward(n, high)
        .map(|r| r.values().to_vec())
        .map_err(pyerr)
}

/// Lipschitz bump reward vanishing near `center`; returns `(values, ball)`.
#[pyfunction]
fn bump_reward(n: usize, center: usize, eta: f64, m: f64) -> PyResult<(Vec<f64>, Vec<usize>)> {
    core::corpus::bump_reward(n, center, eta, m)
        .map(|(r, ball)| (r.values().to_vec(), ball))
        .map_err(pyerr)
}

#[pymodule]
fn _mpelab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Kernel>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_additive, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_bound, m)?)?;
    m.add_function(wrap_pyfunction!(guaranteed_existence, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(average, m)?)?;
    m.add_function(wrap_pyfunction!(average_trace, m)?)?;
    m.add_function(wrap_pyfunction!(taboo_tail, m)?)?;
    m.add_function(wrap_pyfunction!(escape_test, m)?)?;
    m.add_function(wrap_pyfunction!(visit_counts, m)?)?;
    m.add_function(wrap_pyfunction!(sample_paths, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(partial_sum_law, m)?)?;
    m.add_function(wrap_pyfunction!(dominance, m)?)?;
    m.add_function(wrap_pyfunction!(period_two_reward, m)?)?;
    m.add_function(wrap_pyfunction!(block_reward, m)?)?;
    m.add_function(wrap_pyfunction!(bump_reward, m)?)?;
    m.add("RNG_ALGORITHM", core::RNG_ALGORITHM)?;
    Ok(())
}
