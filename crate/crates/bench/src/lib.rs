//! Benchmarks for the exact-arithmetic kernels; see `benches/`.
