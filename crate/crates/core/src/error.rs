use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands act on {left} and {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("qubit count {0} outside the supported range 1..=64")]
    QubitCount(usize),

    #[error("invalid Pauli string {0:?}")]
    PauliParse(String),

    #[error("power t^{power} of the error series is nonzero (one-norm {norm:.3e}); formula order does not match the Hamiltonian")]
    NonVanishingLowOrder { power: usize, norm: f64 },

    #[error("operator is not Hermitian (largest imaginary coefficient {0:.3e})")]
    NonHermitian(f64),

    #[error("partition is empty")]
    EmptyPartition,

    #[error("formula is not palindromic")]
    NotPalindromic,

    #[error("error series vanishes identically; the bare formula is exact")]
    EmptySeries,

    #[error("generator terms do not mutually commute")]
    NonCommutingGenerator,

    #[error("{n} qubits exceeds the dense limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("need at least 3 positive points in the fit window, found {0}")]
    InsufficientPoints(usize),

    #[error("target error not reached within {n_max} layers")]
    NotReached { n_max: usize },

    #[error("line {line}: {msg}")]
    HamiltonianParse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
