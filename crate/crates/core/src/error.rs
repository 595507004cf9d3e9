//! Crate-wide error type.

use core::fmt;

/// Errors surfaced by diagram construction and solving.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input lengths disagree with the declared dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Bandwidth must satisfy `k < n`.
    BandwidthTooLarge { n: usize, k: usize },
    /// An entry was requested or supplied outside the stored band.
    OutsideBand { row: usize, col: usize, k: usize },
    /// A diagonal entry is not strictly positive.
    NonPositiveDiagonal { index: usize, value: f64 },
    /// Conflicting values were supplied for a symmetric entry pair.
    AsymmetricEntry { row: usize, col: usize },
    /// A support set is empty, unsorted, or out of range.
    InvalidSupport(&'static str),
    /// The Schur complement at some layer is not safely positive, which
    /// certifies that a leading principal submatrix is not positive definite.
    NotPositiveDefinite { layer: usize, delta: f64 },
    /// A principal submatrix could not be factorized.
    SingularSubmatrix { pivot: usize },
    /// Two states from different layers were compared.
    LayerMismatch { left: usize, right: usize },
    /// Power iteration did not reach the requested tolerance.
    PowerIterationDiverged { iterations: usize },
    /// Diagram construction exceeded the configured arc budget.
    ArcBudgetExceeded { budget: usize, layer: usize, nodes_so_far: usize },
    /// Path enumeration would exceed the configured cap.
    PathCapExceeded { cap: u128, count: u128 },
    /// The brute-force oracle was asked for a dimension above its cap.
    OracleCapExceeded { cap: usize, n: usize },
    /// Side-constraint automata are not supported in truncated mode.
    AutomatonInTruncatedMode,
    /// Truncation depth must be at least one.
    InvalidTruncationDepth,
    /// No assignment satisfies the side constraints.
    Infeasible,
    /// A signal is constant and cannot be standardized.
    ConstantSignal,
    /// The signal is shorter than the requested window width.
    SignalTooShort { len: usize, width: usize },
    /// A filter parameter is out of range.
    InvalidFilter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Self::BandwidthTooLarge { n, k } => {
                write!(f, "bandwidth {k} is not smaller than dimension {n}")
            }
            Self::OutsideBand { row, col, k } => {
                write!(f, "entry ({row}, {col}) lies outside the band of width {k}")
            }
            Self::NonPositiveDiagonal { index, value } => {
                write!(f, "diagonal entry {index} is {value}, must be positive")
            }
            Self::AsymmetricEntry { row, col } => {
                write!(f, "conflicting values for symmetric entries ({row}, {col}) and ({col}, {row})")
            }
            Self::InvalidSupport(msg) => write!(f, "invalid support set: {msg}"),
            Self::NotPositiveDefinite { layer, delta } => write!(
                f,
                "matrix is not positive definite: Schur complement {delta:e} at layer {layer}"
            ),
            Self::SingularSubmatrix { pivot } => {
                write!(f, "submatrix factorization failed at pivot {pivot}")
            }
            Self::LayerMismatch { left, right } => {
                write!(f, "states from different layers compared: {left} vs {right}")
            }
            Self::PowerIterationDiverged { iterations } => {
                write!(f, "power iteration did not converge within {iterations} iterations")
            }
            Self::ArcBudgetExceeded { budget, layer, nodes_so_far } => write!(
                f,
                "arc budget {budget} exceeded at layer {layer} ({nodes_so_far} nodes built)"
            ),
            Self::PathCapExceeded { cap, count } => {
                write!(f, "diagram encodes {count} paths, enumeration cap is {cap}")
            }
            Self::OracleCapExceeded { cap, n } => {
                write!(f, "oracle cap is {cap} variables, instance has {n}")
            }
            Self::AutomatonInTruncatedMode => {
                write!(f, "truncated diagrams do not support side constraints")
            }
            Self::InvalidTruncationDepth => write!(f, "truncation depth must be at least 1"),
            Self::Infeasible => write!(f, "no assignment satisfies the side constraints"),
            Self::ConstantSignal => write!(f, "signal is constant after centering"),
            Self::SignalTooShort { len, width } => {
                write!(f, "signal of length {len} is shorter than window width {width}")
            }
            Self::InvalidFilter(msg) => write!(f, "invalid filter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
