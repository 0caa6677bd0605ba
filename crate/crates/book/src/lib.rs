//! The guide in `book/src`, one module per chapter.
//!
//! mdbook cannot run snippets that depend on workspace crates, so the chapters
//! are included here as documentation instead and `cargo test --doc` runs every
//! Rust block against the real library. A failing doc-test names the module,
//! and so the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/kahler.md")]
pub mod kahler {}
#[doc = include_str!("../../../book/src/gaussian.md")]
pub mod gaussian {}
#[doc = include_str!("../../../book/src/susy.md")]
pub mod susy {}
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/entropy.md")]
pub mod entropy {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
