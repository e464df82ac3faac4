//! Criterion benches for qauto-core; see `benches/deciders.rs`.
