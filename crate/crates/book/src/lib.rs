//! The guide in `book/` is written for mdbook, which cannot run snippets
//! that depend on external crates. Each chapter is included here as module
//! docs instead, so `cargo test` runs every code block as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/bases.md")]
pub mod bases {}
#[doc = include_str!("../../../book/src/pairs.md")]
pub mod pairs {}
#[doc = include_str!("../../../book/src/phasespace.md")]
pub mod phasespace {}
#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
