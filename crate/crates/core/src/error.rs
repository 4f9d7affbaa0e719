use thiserror::Error;

use crate::exactnum::Rat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("unknown catalog function {0:?}")]
    UnknownFunction(String),
    #[error("parameter {name} = {value} out of range {range}")]
    ParameterOutOfRange { name: String, value: Box<Rat>, range: String },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("function is not minimal: {0}")]
    NotMinimal(String),
    #[error("function is not subadditive at ({x}, {y}): slack {slack}")]
    NotSubadditive { x: Box<Rat>, y: Box<Rat>, slack: Box<Rat> },
    #[error("closure budget of {0} rounds exhausted")]
    BudgetExhausted(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("perturbation check failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
