use thiserror::Error;

/// Failure modes surfaced by the library.
///
/// Checker routines never panic on bad mathematical input; they return one of
/// these so the CLI can report a verified failure instead of crashing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot invert a coefficient that is not a single monomial")]
    NonInvertibleCoefficient,
    #[error("illegal parameter value: {0}")]
    IllegalParameter(String),
    #[error("unsupported Cartan type or rank: {0}")]
    UnsupportedType(String),
    #[error("vector is not a root of this datum")]
    NotARoot,
    #[error("inconsistent parameter assignment: {0}")]
    InconsistentParameters(String),
    #[error("set is not a union of the requested double cosets")]
    NotSaturated,
    #[error("element does not normalize the parabolic subgroup / stabilize its complement")]
    NotInNormalizer,
    #[error("given elements do not form a subgroup of the ambient group")]
    NotASubgroup,
    #[error("operands live over different parameter assignments")]
    ParameterMismatch,
    #[error("commutation rewrite left a non-polynomial quotient: {0}")]
    NonPolynomialQuotient(String),
    #[error("character value must be a nonzero rational")]
    IllegalCharacter,
    #[error("matrices do not satisfy the defining relations: {0}")]
    NotAModule(String),
    #[error("hypothesis violated: {0}")]
    AssumptionViolated(String),
    #[error("a double coset admits no representative of the preferred shape: {0}")]
    NoGoodRepresentative(String),
    #[error("the subcomplex on this subset is an empty sphere")]
    EmptySphere,
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
