use thiserror::Error;

/// Errors shared across the library.
///
/// Contract violations that indicate a bug inside the library itself (rather
/// than bad input) are asserted with `panic!`, not reported through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("this operation requires an odd prime, got p = {0}")]
    EvenPrime(u64),

    #[error("this operation requires p > 3, got p = {0}")]
    PrimeTooSmall(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not nilpotent: A^{p} != 0 for p = {p}")]
    NotNilpotent { p: u64 },

    #[error("ambient mismatch: operands live in different groups ({0})")]
    AmbientMismatch(String),

    #[error("element is not central: a-coordinate {index} is {value}, not divisible by p")]
    NotCentral { index: usize, value: u64 },

    #[error("presentation is not minimal: relator {index} has nonzero mod-p exponent vector {vector:?}")]
    NotMinimal { index: usize, vector: Vec<u64> },

    #[error("character is identically zero")]
    ZeroCharacter,

    #[error("character does not vanish on relator {index}: value {value} mod p")]
    CharacterNotOnGroup { index: usize, value: u64 },

    #[error("invariants are not admissible: {0}")]
    NotAdmissible(String),

    #[error("group order {order} exceeds the enumeration bound {bound}")]
    SizeBound { order: u64, bound: u64 },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("action is incompatible with the presentation: {0}")]
    IncompatibleAction(String),

    #[error("generator action does not have order dividing p")]
    ActionOrder,

    #[error("generator action is not an automorphism (exponent matrix is singular mod p)")]
    ActionNotInvertible,

    #[error("extra relator {index} is not trivial in the class-2 quotient")]
    ExtraRelatorNotInV3 { index: usize },

    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
