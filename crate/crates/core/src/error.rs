use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("operation is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} is not a two-sided identity")]
    NotIdentity(usize),
    #[error("invalid inverse map: {0}")]
    InvalidInverse(String),
    #[error("invalid sub-algebra: {0}")]
    InvalidSubAlgebra(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("quotient by ~ is undefined: {0}")]
    QuotientUndefined(String),
    #[error("inverted variable {0} outside group mode")]
    InvalidAtom(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("constant {0} is outside the declared constant set")]
    ConstantOutsideSet(String),
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("algebra is not Abelian")]
    NotAbelian,
    #[error("not a semilattice: {0}")]
    NotSemilattice(String),
    #[error("element {0} is not regular")]
    NotRegular(usize),
    #[error("target element {0} is regular")]
    RegularTarget(usize),
    #[error("arity {0} is even")]
    EvenArity(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("promise violated: no value survives for variable {0}")]
    PromiseViolated(String),
    #[error("constant {0} lies outside S_W")]
    ConstantOutsideSW(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
