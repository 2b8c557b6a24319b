//! Acceptance gate for `confhom`; the checks live in `tests/acceptance.rs`.
