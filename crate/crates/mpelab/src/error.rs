//! Error type shared across the crate.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building kernels or running the
/// numerical routines.
///
/// Numerical *outcomes* (a solver failing to converge, a divergence verdict)
/// are not errors; they are encoded in result types such as
/// [`crate::mpe::SolveStatus`]. `Error` is reserved for malformed inputs and
/// for computations whose contract cannot be met.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A transition-matrix row does not sum to one within `1e-12`.
    #[error("row {row} sums to {sum:.17}, which is off unity by more than 1e-12")]
    NonStochasticRow { row: usize, sum: f64 },

    /// A transition-matrix entry is negative.
    #[error("negative entry {value:e} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A state label occurs twice in a state space.
    #[error("duplicate state label {label:?}")]
    DuplicateLabel { label: String },

    /// An explicit metric fails one of its defining properties.
    #[error("metric violates {property} at ({i}, {j})")]
    BadMetric {
        property: &'static str,
        i: usize,
        j: usize,
    },

    /// A state index is outside `0..n`.
    #[error("state index {index} out of range for {n} states")]
    BadState { index: usize, n: usize },

    /// The kernel does not have a unique invariant measure.
    #[error("invariant measure is not unique ({classes} recurrent classes)")]
    NonUniqueInvariant { classes: usize },

    /// A taboo/target set that must be non-empty is empty.
    #[error("taboo set is empty")]
    EmptyTaboo,

    /// The risk parameter `gamma` must be nonzero.
    #[error("risk parameter gamma must be nonzero")]
    ZeroGamma,

    /// A scalar argument lies outside the domain of the function.
    #[error("argument {value} outside domain {domain}")]
    DomainError { value: f64, domain: &'static str },

    /// A mixing-coefficient relation that must hold was violated beyond
    /// tolerance (this indicates a numerical problem, not bad input).
    #[error("mixing relation {relation} violated by {violation:e} at n={n}, m={m}")]
    RelationViolated {
        relation: &'static str,
        n: usize,
        m: usize,
        violation: f64,
    },

    /// Reward values cannot be placed on a common arithmetic lattice.
    #[error("reward values do not lie on a common lattice: {reason}")]
    NonLatticeReward { reason: String },

    /// An iterative routine failed to reach its required accuracy.
    #[error("{what} failed to converge (residual {residual:e})")]
    ConvergenceFailure { what: &'static str, residual: f64 },

    /// Catch-all for parameter validation (sizes, counts, ranges).
    #[error("invalid parameter: {0}")]
    BadParameters(String),

    /// Reading or writing a file failed.
    #[error("io error on {path:?}: {message}")]
    Io { path: String, message: String },

    /// A file's content could not be parsed in the expected format.
    #[error("cannot parse {path:?}: {message}")]
    Parse { path: String, message: String },
}
