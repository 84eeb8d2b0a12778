//! Benchmarks for the eurelax pipeline; see `benches/`.

/// Sizes used across benchmark groups.
pub const SIZES: [usize; 3] = [6, 10, 14];
