//! Acceptance checks for `qspace-spf` live in `tests/acceptance.rs`; this
//! package has no library code of its own.
