//! Benchmarks for the `slowdec` kernels live in `benches/`; run them with
//! `cargo bench -p slowdec-bench`.
