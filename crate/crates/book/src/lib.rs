//! Guide chapters, compiled as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/presentations.md")]
pub mod presentations {}

#[doc = include_str!("../../../book/src/rewriting.md")]
pub mod rewriting {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/results.md")]
pub mod results {}
