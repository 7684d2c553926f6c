//! The guide in `book/src`, one module per chapter, so that `cargo test`
//! runs every snippet in it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/self-similar-action.md")]
pub mod self_similar_action {}

#[doc = include_str!("../../../book/src/fixed-point-measure.md")]
pub mod fixed_point_measure {}

#[doc = include_str!("../../../book/src/simplicity.md")]
pub mod simplicity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
