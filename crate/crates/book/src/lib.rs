// mdbook can't run a book's code listings against a workspace crate, so each
// chapter is pulled in as a module's docs and `cargo test --doc` runs them.

#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/exp3.md")]
pub mod exp3 {}
#[doc = include_str!("../../../book/src/dp-exp3-lap.md")]
pub mod dp_exp3_lap {}
#[doc = include_str!("../../../book/src/batching.md")]
pub mod batching {}
#[doc = include_str!("../../../book/src/privacy-accounting.md")]
pub mod privacy_accounting {}
#[doc = include_str!("../../../book/src/adversaries.md")]
pub mod adversaries {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
