//! Hypothesis-driven backward logical reasoning over hybrid contexts.
//!
//! Premises are selectively translated into first-order logic
//! ([`translation`]); sentences that cannot be translated reliably stay as
//! text. [`reasoning`] then works backward from the conclusion, taking
//! symbolic steps where it can and asking a natural-language [`oracle`]
//! where it must. [`harness`] runs whole datasets and compares
//! configurations.

pub mod cli;
pub mod fol;
pub mod harness;
pub mod oracle;
pub mod par;
pub mod reasoning;
pub mod translation;
