//! Criterion benchmarks for the sneakpath crates; see `benches/`.
