//! Rational self-maps of projective space, orbits and degree growth.

mod degrees;
pub mod linalg;
mod map;
pub mod mpoly;
mod orbit;

pub use degrees::{
    arithmetic_dynamical_degree, check_submultiplicative, degree_sequence, fekete_limit,
    monomial_dynamical_degrees, DegreeReport, FeketeInterval, LambdaInterval,
};
pub use map::{compose_reduce, matrix_power, variable_names, MonomialData, RationalMap};
pub use mpoly::MPoly;
pub use orbit::{iterate_point, OrbitConfig, OrbitEntry, OrbitTrace, OrbitValue, StopReason};
