//! Criterion benchmarks for the unitals pipeline; see `benches/pipeline.rs`.
