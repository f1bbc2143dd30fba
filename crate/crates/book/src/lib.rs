//! The chapters of the book under `book/src`, one module each, so that
//! `cargo test --doc` runs every code block in them. A failing doc-test
//! names the module, which names the chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}
#[doc = include_str!("../../../book/src/rewriting.md")]
pub mod rewriting {}
#[doc = include_str!("../../../book/src/critical-pairs.md")]
pub mod critical_pairs {}
#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}
#[doc = include_str!("../../../book/src/smith.md")]
pub mod smith {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/equivalence.md")]
pub mod equivalence {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/json.md")]
pub mod json {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
