use thiserror::Error;

pub type Result<T> = std::result::Result<T, QlbmError>;

#[derive(Debug, Error)]
pub enum QlbmError {
    #[error("unsupported lattice dimension {0} (expected 1, 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("extent {extent} on axis {axis} is not a power of two >= 2")]
    InvalidExtent { axis: usize, extent: usize },
    #[error("invalid obstacle {index}: {reason}")]
    InvalidObstacle { index: usize, reason: String },
    #[error("field shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("negative or non-finite density {value} at cell {cell}, velocity {velocity}")]
    NegativeDensity { cell: usize, velocity: usize, value: f64 },
    #[error("density {value} placed on solid cell {cell}, velocity {velocity}")]
    DensityInSolid { cell: usize, velocity: usize, value: f64 },
    #[error("total mass must be positive and finite, got {0}")]
    ZeroMass(f64),
    #[error("relaxation time tau = {0} must exceed 0.5")]
    TauOutOfRange(f64),
    #[error("velocity magnitude {0} exceeds the 0.3 lattice-units guard")]
    VelocityGuard(f64),
    #[error("bounce-back found mass on solid cell {cell} that did not come from a fluid cell")]
    BounceBackDepth { cell: usize },
    #[error("qubit {0} used more than once in a gate")]
    DuplicateQubit(usize),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("malformed range [{lo}, {hi}] for a {bits}-qubit register")]
    MalformedRange { lo: usize, hi: usize, bits: usize },
    #[error("ancilla still entangled: amplitude {magnitude:e} at basis state {index:#b}")]
    AncillaEntangled { index: usize, magnitude: f64 },
    #[error("shot count must be at least 1")]
    MissingShots,
    #[error("run needs {needed} qubits, above the {limit}-qubit budget")]
    QubitBudget { needed: usize, limit: usize },
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
