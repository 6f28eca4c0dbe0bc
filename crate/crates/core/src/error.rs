use crate::concepts::{ConceptReport, Signature, ValueKind};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Faults raised by function handles, grids and grid functions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{}", .0.diagnostic())]
    ConceptViolation(ConceptReport),

    #[error("range not convertible: {from} cannot be converted to {to}")]
    RangeNotConvertible { from: ValueKind, to: ValueKind },

    #[error("empty handle")]
    EmptyHandle,

    #[error("derivative unavailable")]
    DerivativeUnavailable,

    #[error(
        "derivative range is invalid for signature {signature} under `{traits}` derivative traits"
    )]
    InvalidDerivativeRange {
        signature: Signature,
        traits: String,
    },

    #[error("a grid needs at least one element")]
    EmptyGrid,

    #[error("element index {index} out of range for a grid with {len} elements")]
    ElementIndex { index: usize, len: usize },

    #[error("local coordinate out of reference element: {0}")]
    LocalCoordinateOutOfRange(f64),

    #[error("point outside grid: {0}")]
    PointOutsideGrid(f64),

    #[error("element not in grid view")]
    ForeignElement,

    #[error("unbound local function")]
    UnboundLocalFunction,

    #[error("expected {expected} nodal values, found {found}")]
    NodalCount { expected: usize, found: usize },
}
