//! Command-line front end for the toric quotient pipeline: fan document
//! ingestion, report assembly, and exit-code policy.

pub mod commands;
pub mod doc;
pub mod json;
pub mod report;

/// Reads the certificate search bound from TORIQ_SEARCH_BOUND, defaulting
/// to 12.
pub fn search_bound_from_env() -> u32 {
    std::env::var("TORIQ_SEARCH_BOUND")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(12)
}
