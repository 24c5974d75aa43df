//! Error surface of the engine.
//!
//! Every fallible operation returns one of these variants; the kebab-case
//! `kind()` strings are stable identifiers used by the CLI when reporting
//! rejected inputs, so changing them is a breaking change.

use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Operands disagree on ring, variable count, or truncation cap.
    #[error("structural mismatch: {0}")]
    StructuralMismatch(String),

    /// A substitution target was malformed (wrong arity, nonzero constant
    /// term, or incompatible shape).
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    /// Compositional reversion was asked of a series it cannot apply to.
    #[error("not reversible: {0}")]
    NotReversible(String),

    /// Division by a series whose constant term is not a unit.
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// A construction needs more generators or a higher cap than provided.
    #[error("capacity: {0}")]
    Capacity(String),

    /// A coefficient does not live in the ring it was claimed to.
    #[error("ring error: {0}")]
    RingError(String),

    /// Input outside the operation's domain (negative dimension, wrong
    /// arity, a scalar that does not embed, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A specialization left some generator without a value.
    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),

    /// A claimed formal group law fails one of the defining axioms.
    #[error("invalid formal group law: {axiom} fails at {witness}")]
    InvalidFgl { axiom: String, witness: String },

    /// A twist sequence violates its normalization or grading rules.
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    /// A root handed to a split Todd evaluation is not nilpotent.
    #[error("invalid root: {0}")]
    InvalidRoot(String),

    /// Internal consistency check of a pushforward convention failed;
    /// the data cannot be coherently interpreted.
    #[error("convention fault: {0}")]
    ConventionFault(String),

    /// Serialized input could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

impl AlgebraError {
    /// Stable kebab-case identifier of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraError::StructuralMismatch(_) => "structural-mismatch",
            AlgebraError::InvalidSubstitution(_) => "invalid-substitution",
            AlgebraError::NotReversible(_) => "not-reversible",
            AlgebraError::NotAUnit(_) => "not-a-unit",
            AlgebraError::Capacity(_) => "capacity",
            AlgebraError::RingError(_) => "ring-error",
            AlgebraError::Domain(_) => "domain-error",
            AlgebraError::IncompleteAssignment(_) => "incomplete-assignment",
            AlgebraError::InvalidFgl { .. } => "invalid-fgl",
            AlgebraError::InvalidSequence(_) => "invalid-sequence",
            AlgebraError::InvalidRoot(_) => "invalid-root",
            AlgebraError::ConventionFault(_) => "convention-fault",
            AlgebraError::Parse(_) => "parse-error",
        }
    }
}

/// Engine-wide result alias.
pub type Result<T> = std::result::Result<T, AlgebraError>;
