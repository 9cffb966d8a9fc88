use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("polynomial is not primitive")]
    NotPrimitive,
    #[error("the archimedean place has no valuation")]
    ArchimedeanPlace,
    #[error("all coordinates are zero")]
    AllZero,
    #[error("coordinate involves t but the field is Q")]
    NotOverQ,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular exponent matrix")]
    SingularMatrix,
    #[error("map is not dominant: {0}")]
    NotDominant(String),
    #[error("map is not a morphism")]
    NotMorphism,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("estimate did not converge: {0}")]
    Unconverged(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sequence is not submultiplicative at (m, n) = ({0}, {1})")]
    NotSubmultiplicative(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
