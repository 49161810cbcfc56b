//! Numerical thresholds shared across the crate.
//!
//! All residuals are Frobenius norms of coefficient arrays in the canonical
//! basis, compared against an absolute threshold.

/// Default threshold for residuals of structural identities (Schur
/// idempotency, indicator properties, correspondence and Fock identities).
pub const THEOREM: f64 = 1e-9;

/// Threshold for identities that hold up to pure floating point rounding.
pub const ALGEBRAIC: f64 = 1e-12;

/// Relative eigenvalue cutoff used when quotienting a spanning set by the
/// kernel of its Gram matrix.
pub const GRAM_CUTOFF: f64 = 1e-10;

/// Choi eigenvalues are accepted down to `-CHOI_RELATIVE * max |eigenvalue|`.
pub const CHOI_RELATIVE: f64 = 1e-10;

/// Maximum total number of coordinates in a Fock truncation.
pub const FOCK_BUDGET: usize = 5000;

/// Environment variable overriding [`THEOREM`] for the command line front end.
pub const ENV_OVERRIDE: &str = "QGRAPH_TOL";

/// Reads the tolerance override from the environment, falling back to
/// [`THEOREM`]. Non-finite or non-positive values are ignored.
pub fn from_env() -> f64 {
    std::env::var(ENV_OVERRIDE)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(THEOREM)
}
