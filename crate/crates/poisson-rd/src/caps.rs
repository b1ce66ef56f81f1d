//! Size caps for the search-based operations, overridable via environment.

use std::env;

pub const DEFAULT_GENERATE_CAP: usize = 100_000;
pub const DEFAULT_ISO_CAP: usize = 400;
pub const DEFAULT_AUT_VERTEX_CAP: usize = 16;

fn env_cap(var: &str, default: usize) -> usize {
    env::var(var)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(default)
}

/// Maximum number of elements `FiniteGroup::generate` will enumerate.
pub fn generate_cap() -> usize {
    env_cap("POISSON_RD_GENERATE_CAP", DEFAULT_GENERATE_CAP)
}

/// Maximum group order accepted by the isomorphism search.
pub fn iso_cap() -> usize {
    env_cap("POISSON_RD_ISO_CAP", DEFAULT_ISO_CAP)
}

/// Maximum vertex count accepted by the graph-automorphism search.
pub fn aut_vertex_cap() -> usize {
    env_cap("POISSON_RD_AUT_VERTEX_CAP", DEFAULT_AUT_VERTEX_CAP)
}
