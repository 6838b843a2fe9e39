use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("face closure violated: {face:?} is a face of {simplex:?} but is not listed")]
    FaceClosure { simplex: Vec<usize>, face: Vec<usize> },
    #[error("duplicate simplex {0:?}")]
    Duplicate(Vec<usize>),
    #[error("degree {degree} out of range (maximum {max})")]
    Degree { degree: usize, max: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("coefficient ring mismatch: {0}")]
    Ring(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("class is not in the image of i2: delta2 = {0}")]
    NotInImage(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("geometry budget exceeded: nothing suitable within {max_subdiv} subdivisions")]
    GeometryBudgetExceeded { max_subdiv: usize },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("i/o error: {0}")]
    Io(String),
}
