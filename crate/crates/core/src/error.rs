use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not self-adjoint for the gram form (defect {defect:.3e} > {tolerance:.3e})")]
    NotSelfAdjoint { defect: f64, tolerance: f64 },
    #[error("gram matrix is not Hermitian positive definite")]
    DegenerateGram,
    #[error("eigenvalue {eigenvalue:.3e} lies inside the kernel tolerance {tolerance:.3e}")]
    KernelViolation { eigenvalue: f64, tolerance: f64 },
    #[error("function is not finite at eigenvalue {eigenvalue}")]
    FunctionSingularAtEigenvalue { eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("potential {value} at point {index} is below the mass floor {floor}")]
    NonPositivePotential { index: usize, value: f64, floor: f64 },
    #[error("lapse {value} at point {index} is not positive")]
    DegenerateLapse { index: usize, value: f64 },
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("quadratic pencil is numerically singular (condition estimate {condition:.3e})")]
    PencilSingular { condition: f64 },
    #[error("s = {s} lies outside the window [-{beta}, {beta}]")]
    OutOfWindow { s: f64, beta: f64 },
    #[error("non-finite value in a thermal factor")]
    Overflow,
    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: String, found: String },
    #[error("doubled data does not match the eigenbasis dimension {expected} (found {found})")]
    BasisMismatch { expected: usize, found: usize },
    #[error("wedge reflection inconsistent: {0}")]
    ReflectionInconsistent(String),
    #[error("charge form is singular")]
    ChargeSingular,
    #[error("metric is not sectorial at node {index}")]
    NotSectorial { index: usize },
    #[error("grid misaligned: {0}")]
    GridMisaligned(String),
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("jump defect {defect:.3e} exceeds the mesh bound {bound:.3e}")]
    JumpDefect { defect: f64, bound: f64 },
    #[error("parity fit residual {residual:.3e} exceeds {tolerance:.1e}: {what}")]
    ParityViolation { what: String, residual: f64, tolerance: f64 },
    #[error("beta = {beta} differs from the Hawking value {hawking}")]
    WrongTemperature { beta: f64, hawking: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
