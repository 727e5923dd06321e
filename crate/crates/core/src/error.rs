use thiserror::Error;

use crate::scalar::Scalar;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("scalars from different fields ({0} vs {1})")]
    ModulusMismatch(String, String),

    #[error("{0} is not a supported prime modulus (need a prime below 2^32)")]
    BadModulus(u64),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid leg permutation {0:?}")]
    BadPermutation(Vec<usize>),

    #[error("map is singular (kernel dimension {kernel_dim})")]
    Singular { kernel_dim: usize },

    #[error("element is not invertible")]
    NotInvertible { witness: Vec<Scalar> },

    #[error("{legs} tensor legs exceed the cap of {cap}")]
    LegCapExceeded { legs: usize, cap: usize },

    #[error("dimension {dim} exceeds the cap of {cap} (set TORSORKIT_MAX_DIM to raise it)")]
    DimensionCap { dim: usize, cap: usize },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("input is not a verified {kind}: {detail}")]
    Unverified { kind: &'static str, detail: String },

    #[error("twist is invalid: {0}")]
    TwistInvalid(String),

    #[error("image escapes the carrier: {0}")]
    CorestrictionFailure(String),

    #[error("membership failure: {0}")]
    MembershipFailure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not a Hopf algebra isomorphism: {0}")]
    PhiNotIso(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("reference Hopf algebras differ: {0}")]
    ReferenceHopfMismatch(String),

    #[error("equivalence witness rejected: {0}")]
    WitnessRejected(String),

    #[error("search space of {size} functionals exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },

    #[error("wrong characteristic: {0}")]
    BadCharacteristic(String),

    #[error("parameter d must be invertible")]
    DNotInvertible,

    #[error("not a Galois action: {0}")]
    NotGaloisAction(String),

    #[error("polynomial is not separable")]
    NotSeparable,

    #[error("q is not a primitive root of unity of the requested order: {0}")]
    QNotPrimitive(String),

    #[error("alpha and beta must be nonzero")]
    AlphaBetaZero,

    #[error("Hopf algebra fails verification: {0}")]
    HopfInvalid(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),
}
