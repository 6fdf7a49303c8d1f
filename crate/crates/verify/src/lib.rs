//! Acceptance checks for c2ss, with an independent brute-force oracle.

pub mod criteria;
pub mod oracle;
pub mod soundness;
