use thiserror::Error;

/// Errors reported by state, operator, and ensemble construction.
#[derive(Debug, Error)]
pub enum SimError {
    /// A state vector failed the unit-norm check.
    #[error("state is not normalized: |norm - 1| = {deviation:.3e} exceeds tolerance")]
    NotNormalized { deviation: f64 },

    /// A constructed value contains a NaN or infinite entry.
    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },

    /// Two single-particle states fail the orthogonality check.
    #[error("basis states are not orthogonal: |<plus|minus>| = {overlap:.3e}")]
    NotOrthogonal { overlap: f64 },

    /// A tensor construction was requested above the dimension cap.
    #[error("{kind} construction capped at {cap} qubits, got {requested}")]
    DimensionCap {
        kind: &'static str,
        requested: usize,
        cap: usize,
    },

    /// A Kronecker product over an empty factor list.
    #[error("tensor product requires at least one factor")]
    EmptyProduct,

    /// Operands act on different particle counts.
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    /// An operation required a structural flag the operand does not carry.
    #[error("operator flag violation: expected {expected}")]
    FlagViolation { expected: &'static str },

    /// Mixture weights are not positive or do not sum to one.
    #[error("invalid mixture weights: {reason}")]
    InvalidWeights { reason: String },

    /// The up-spin count of a fixed-magnetization preparation is out of range.
    #[error("up-count m = {m} out of range for n = {n} particles")]
    MagnetizationOutOfRange { m: usize, n: usize },

    /// Mixture terms have inconsistent particle counts.
    #[error("mixture term {index} has {got} particles, expected {expected}")]
    TermLengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },

    /// The difference of two purported density operators is not Hermitian,
    /// which signals a construction bug upstream of the eigensolver.
    #[error("operator is not Hermitian: max |A - A^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// A variance came out more negative than roundoff can explain.
    #[error("negative variance {value:.3e} below clamping window; operator data is corrupt")]
    NegativeVariance { value: f64 },

    /// Empirical moments need at least two beams.
    #[error("empirical moments require at least 2 beams, got {beams}")]
    NotEnoughBeams { beams: usize },

    /// Antisymmetrization produced the zero vector (Pauli exclusion).
    #[error("antisymmetrized state vanishes: single-particle states are linearly dependent")]
    NullState,

    /// A slot label does not fit the requested expansion space.
    #[error("slot label {slot} outside expansion range of {slot_count} slots")]
    SlotOutOfRange { slot: usize, slot_count: usize },

    /// The eigensolver did not converge.
    #[error("eigensolver failed to converge on a {dim}x{dim} Hermitian matrix")]
    EigenFailure { dim: usize },
}

pub type Result<T> = std::result::Result<T, SimError>;
