//! Cobweb layers, discrete F-boxes and their tilings.
//!
//! An *F-sequence* is a sequence of positive integers `1_F, 2_F, ...`. It
//! determines a family of combinatorial objects:
//!
//! - the F-box `V_{m,n} = [k_F] x ... x [n_F]` with `k = n - m + 1`, and its
//!   equivalent *cobweb layer* `<k -> n>` whose levels hold `s_F` vertices;
//! - the F-nomial coefficients `n_F! / (m_F! (n-m)_F!)` and their multi
//!   variants, which count blocks in a partition of a layer;
//! - *blocks* `σP_m`, sub-layers whose level sizes are a permutation of
//!   `1_F, ..., m_F`, and *tilings*, partitions of a layer's maximal paths
//!   into such blocks.
//!
//! The crate is organized bottom-up:
//!
//! - [`fsequence`]: sequence families and their splitting coefficients.
//! - [`coefficients`]: F-factorials, F-nomials, multi F-nomials and the
//!   recurrence identities they satisfy.
//! - [`geometry`]: layers, maximal paths, blocks and block enumeration.
//! - [`tiling`]: the recursive tiling construction, verification, the
//!   construction count and an exact-cover enumerator of all tilings.
//! - [`blockgraph`]: the disjointness graph on blocks, in which tilings are
//!   exactly the cliques of size `fnomial(n, m)`.
//! - [`format`]: JSON documents, DOT export and SVG rendering.
//!
//! ```
//! use cobweb::{coefficients, FSequence};
//!
//! let fib: FSequence = "fp:p=1".parse().unwrap();
//! assert_eq!(coefficients::fnomial(&fib, 5, 2).unwrap(), 15u32.into());
//! ```

pub mod blockgraph;
pub mod coefficients;
pub mod format;
pub mod fsequence;
pub mod geometry;
pub mod tiling;

/// Arbitrary-precision natural number used for terms, factorials and counts.
pub type Nat = num_bigint::BigUint;

pub use fsequence::{Composition, FSequence, Family, LambdaPair, SequenceError};
pub use geometry::{Block, BlockShape, Layer, ShapeFamily};
pub use tiling::{ChoiceStrategy, Tiling};
