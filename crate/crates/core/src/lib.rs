//! Heights of points of projective space over ℚ and ℚ(t), iteration of rational
//! self-maps, and estimation of dynamical degrees, arithmetic degrees and
//! canonical heights.
//!
//! The function field ℚ(t) is polarized by the model (ℙ¹_ℤ, O(1) with the
//! Fubini–Study metric). A height over ℚ(t) is a sum of finite-place
//! contributions (vertical primes with weight `log p`, horizontal divisors
//! with their Fubini–Study arithmetic degree) and an archimedean integral of
//! `log max |λ_i|` against the Fubini–Study probability measure on ℙ¹(ℂ).
//!
//! Module map:
//!
//! | module        | contents                                                    |
//! |---------------|-------------------------------------------------------------|
//! | [`ratfunc`]   | exact ℚ / ℤ[t] / ℚ(t) arithmetic, coprime bases             |
//! | [`places`]    | valuations, place weights, Weil / geometric / Moriwaki heights |
//! | [`quadrature`]| integration of log-max integrands against the FS measure   |
//! | [`dynamics`]  | rational self-maps, composition, orbits, degree sequences   |
//! | [`estimators`]| arithmetic degrees, canonical heights, inequality audits    |
//! | [`search`]    | bounded-height enumeration, Northcott counts, preperiodic points |

pub mod dynamics;
pub mod error;
pub mod estimators;
pub mod places;
pub mod quadrature;
pub mod ratfunc;
pub mod search;

pub use error::{Error, Result};
