//! Arithmetic degrees along orbits, canonical heights, and audits of the
//! fundamental inequality.

mod alpha;
mod audit;
mod canonical;
mod ksc;

pub use alpha::{alpha_from_sequence, alpha_from_trace, estimate_alpha, AlphaEstimate, CONVERGED_WIDTH};
pub use audit::{audit_cases, fundamental_inequality_audit, AuditCase, AuditSpec, AuditSummary};
pub use canonical::{canonical_height, CanonicalConfig, CanonicalHeightResult};
pub use ksc::{ksc_check, ksc_from_trace, lambda1_of, KscConfig, KscReport, Verdict};
