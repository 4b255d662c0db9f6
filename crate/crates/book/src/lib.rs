//! The guide under `book/` doubles as a test suite: every chapter is pulled
//! in here so `cargo test` runs its `rust` blocks as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}
#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}
#[doc = include_str!("../../../book/src/perspective.md")]
pub mod perspective {}
#[doc = include_str!("../../../book/src/transference.md")]
pub mod transference {}
#[doc = include_str!("../../../book/src/rindler.md")]
pub mod rindler {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
