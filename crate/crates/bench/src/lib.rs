//! Criterion benchmarks of the reskit kernels live in `benches/`.
