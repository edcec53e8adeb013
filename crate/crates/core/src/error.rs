use thiserror::Error;

use crate::complex::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors for construction and precondition violations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("facet {facet:?} has {} vertices, expected {expected}", facet.len())]
    FacetWrongLength { facet: Vec<Vertex>, expected: usize },

    #[error("facet {facet:?} has a repeated vertex")]
    RepeatedVertex { facet: Vec<Vertex> },

    #[error("face dimension {k} out of range -1..={dim}")]
    FaceDimOutOfRange { k: isize, dim: usize },

    #[error("{face:?} is not a face of the complex")]
    NotAFace { face: Vec<Vertex> },

    #[error("{face:?} is not a facet of the complex")]
    NotAFacet { face: Vec<Vertex> },

    #[error("expected a face of dimension {expected}, got dimension {got}")]
    WrongFaceDimension { expected: isize, got: isize },

    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(Vertex),

    #[error("matching is not a bijection between the glued facets")]
    BadMatching,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coloring is missing vertex {0}")]
    ColoringNotTotal(Vertex),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("census budget exceeded: n_max {0} > 9")]
    CensusBudget(u32),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }
}
