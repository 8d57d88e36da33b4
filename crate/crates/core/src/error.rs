use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("algebra invalid: {0}")]
    InvalidAlgebra(String),

    #[error("module invalid: {0}")]
    InvalidModule(String),

    #[error("subspace is not invariant: vector {vector:?} moved out by basis element {basis_element}")]
    NotInvariant { vector: Vec<String>, basis_element: String },

    #[error("non-admissible relations at cap {cap}: {detail}; raise the cap or fix the relations")]
    NotAdmissible { cap: usize, detail: String },

    #[error("unsupported characteristic {characteristic} for the trace-form radical (needs 0 or > {needed}); no finite-field fallback within budget")]
    UnsupportedCharacteristic { characteristic: u64, needed: usize },

    #[error("module is not certified indecomposable; decompose it first")]
    NotCertified,

    #[error("zero module has no indecomposability status")]
    ZeroModule,

    #[error("interpretation data not well-defined on this module: {0}")]
    NotWellDefined(String),

    #[error("inconsistent interpretation data: {0}")]
    Inconsistent(String),

    #[error("formula not in the isolating shape: {0}; renormalise it with pp_type_generator")]
    Shape(String),

    #[error("enumeration budget exceeded: needs {required} candidate tuples, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
