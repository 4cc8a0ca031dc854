//! Acceptance checks for `vibrolang-core` live in `tests/acceptance.rs`.
//! Run with `cargo test -p vibrolang-validation --release`.
