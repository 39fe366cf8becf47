use thiserror::Error;

use crate::field::ArithError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid number field modulus {0}: must be squarefree of positive degree")]
    InvalidModulus(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("operation requires {expected} variables, got {got}")]
    WrongNvars { expected: &'static str, got: usize },
    #[error("input is constant")]
    ConstantInput,
    #[error("input is composite (generic fiber has {0} absolutely irreducible factors)")]
    CompositeInput(usize),
    #[error("base fraction is composite")]
    CompositeBase,
    #[error("degree law violated: deg r * deg g = {expected}, composition has degree {got}")]
    DegreeLawViolation { expected: usize, got: usize },
    #[error("degree mismatch: {inner} does not divide {outer}")]
    DegreeMismatch { outer: usize, inner: usize },
    #[error("no non-degenerate slice found after {0} attempts")]
    SliceDegenerate(usize),
    #[error("decomposition extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeLimit { degree: usize, limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
