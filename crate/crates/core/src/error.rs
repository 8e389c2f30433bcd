use crate::linalg::Int;

/// Errors shared across the crate. Fan validation problems are reported as
/// data (see `fan::ValidationReport`); these variants cover conditions that
/// stop a computation outright.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is the zero cone")]
    ZeroCone,
    #[error("unknown ray index {0}")]
    UnknownRay(usize),
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
    #[error("rays of the fan do not span the ambient space")]
    SpanDeficient,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("divisor class group of the fan has torsion invariants {0:?}")]
    TorsionPic(Vec<Int>),
    #[error("no vanishing witness exists for cones {0:?}")]
    NotEnoughCartier(Vec<usize>),
    #[error("certificate search failed: {0}")]
    CertificateFailure(String),
    #[error("restriction is not induced by a lattice character")]
    NonIntegralRestriction,
    #[error("no monomial of the requested degree exists on the chart")]
    DegreeUnreachable,
    #[error("mismatched dimensions: {0}")]
    Dimension(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
