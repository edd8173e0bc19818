//! Criterion benchmarks for the exact kernel; see `benches/kernel.rs`.
