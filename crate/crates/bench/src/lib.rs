//! Criterion benchmarks for the search and counting kernels; see `benches/`.
