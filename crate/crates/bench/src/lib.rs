//! Benchmark-only crate; the suites live in `benches/benchmarks.rs`.
