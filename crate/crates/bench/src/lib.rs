//! Benchmark-only crate; see `benches/kernels.rs` for the criterion
//! harness covering the decomposition kernels and the measurement loop.
