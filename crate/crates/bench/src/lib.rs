//! Benchmark-only crate; the measurements live in `benches/kernels.rs`.
//!
//! Run with `cargo bench -p spheremass-bench`.
