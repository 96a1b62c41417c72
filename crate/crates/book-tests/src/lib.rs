//! Every Rust snippet in `book/src` runs as a doc-test of this crate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/growth-models.md")]
pub mod growth_models {}

#[doc = include_str!("../../../book/src/degree-law.md")]
pub mod degree_law {}

#[doc = include_str!("../../../book/src/tail-estimation.md")]
pub mod tail_estimation {}

#[doc = include_str!("../../../book/src/embedding.md")]
pub mod embedding {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
