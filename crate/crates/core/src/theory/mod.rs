//! RIP constants by enumeration and the sufficient-condition evaluators.

mod conditions;
mod lemma3;
mod rip;

pub use conditions::{
    corollary1_bound, corollary1_check, corollary2_bound, corollary2_check, eta, omp_recovery_condition,
    theorem1_check, Conditions, DeltaProvider, DeltaTable, ExactDelta, TheoremCheck, UniformDelta,
};
pub use lemma3::lemma3_identity_check;
pub use rip::{
    binomial, rip_constant, rip_constant_ranks, rip_monte_carlo, RipMethod, RipReport, MAX_EXACT_SUBSETS,
};
