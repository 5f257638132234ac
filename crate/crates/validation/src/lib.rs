//! Acceptance suite for `tanner-lo`, kept in its own crate so that it runs
//! after every other test target. See `tests/acceptance.rs`.
