//! Benchmarks for the indefinite-sum engine live under `benches/`.
