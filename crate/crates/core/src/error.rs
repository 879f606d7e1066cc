use thiserror::Error;

use crate::space::Point;

/// Errors raised by the library. Failed checks are never errors; they are
/// reported through the verdict types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("adjacency c_{u} is not defined in dimension {dim} (need 1 <= u <= {dim})")]
    AdjacencyOutOfRange { u: usize, dim: usize },

    #[error("a point needs at least one coordinate")]
    ZeroDimension,

    #[error("a digital image must contain at least one point")]
    EmptyImage,

    #[error("point {0} listed more than once")]
    DuplicatePoint(Point),

    #[error("point {0} is not in the image")]
    PointNotInImage(Point),

    #[error("invalid digital interval [{a}, {b}]: need a <= b")]
    InvalidInterval { a: i64, b: i64 },

    #[error("the shortest-path metric needs a connected image ({components} components found)")]
    Disconnected { components: usize },

    #[error("l_p metric needs p >= 1, got {0}")]
    InvalidExponent(String),

    #[error("the l_p metric with p = {0} has no exact representation; use a floating-point scalar")]
    InexactMetric(String),

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("map is not total: no value given for {0}")]
    PartialMap(Point),

    #[error("non-lattice value at {input}: {value} is not an integer point")]
    NonLatticeValue { input: String, value: String },

    #[error("non-lattice argument {0}")]
    NonLatticeArgument(String),

    #[error("value {value} assigned to {input} lies outside the domain")]
    ValueOutsideDomain { input: Point, value: Point },

    #[error("{0} is assigned more than once")]
    DuplicateAssignment(Point),

    #[error("maps are defined on different domains")]
    DomainMismatch,

    #[error("enumeration budget exceeded: {what} would need {needed} items (limit {limit})")]
    BudgetExceeded { what: String, needed: u128, limit: u128 },

    #[error("parameter {name} = {value} outside its legal range {range}")]
    ParameterOutOfRange { name: &'static str, value: String, range: &'static str },

    #[error("{0} is not a fixed point of the map")]
    NotFixedPoint(Point),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
