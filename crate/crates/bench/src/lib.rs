//! Fixtures shared by the benchmarks.

/// Initial data `(s, t)` used across the benchmarks.
pub const SECOND_TYPE_PARAMS: [(f64, f64); 2] = [(std::f64::consts::LN_2, 0.0), (1.0, 0.5)];
