use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("rank must be positive")]
    ZeroRank,

    #[error("polyhedron has no vertices")]
    EmptyPolyhedron,

    #[error("tail cone is not pointed")]
    NotPointed,

    #[error("weight {weight} is not in the dual of the tail cone: pairing with ray {ray} is negative")]
    NotInDualTail { weight: String, ray: String },

    #[error("coefficient at {label:?} has tail cone different from the divisor tail")]
    TailMismatch { label: String },

    #[error("point {label:?} is not a point of the base curve")]
    UnknownPoint { label: String },

    #[error("point {label:?} has a nontrivial coefficient and cannot belong to U")]
    NontrivialInU { label: String },

    #[error("gluing invariant violated at {label:?}: zero slice differs from (0, tail)")]
    GluingViolation { label: String },

    #[error("invalid base curve: {0}")]
    InvalidCurve(String),

    #[error("parse error: {0}")]
    Parse(String),
}
