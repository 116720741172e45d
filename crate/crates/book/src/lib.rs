//! The guide's chapters, compiled so their listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/coefficients.md")]
pub mod coefficients {}

#[doc = include_str!("../../../book/src/layers.md")]
pub mod layers {}

#[doc = include_str!("../../../book/src/tiling.md")]
pub mod tiling {}

#[doc = include_str!("../../../book/src/cliques.md")]
pub mod cliques {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
