//! Tilings of cobweb layers.
//!
//! A tiling partitions the maximal paths of a layer into pairwise
//! max-disjoint blocks of one shape family. This module holds:
//!
//! - [`construct_tiling`] and [`construct_multi_tiling`], the recursive
//!   constructions for sequences that carry splitting coefficients;
//! - [`construct_all_tilings`], which follows every choice the construction
//!   can make and deduplicates the results;
//! - [`count_construction_tilings`], the closed recurrence for that count;
//! - [`verify_tiling`];
//! - [`enumerate_all_tilings`], an exact-cover search over the whole block
//!   family that finds every tiling, constructible or not.

mod construct;
mod count;
mod exact_cover;
mod verify;

pub use construct::{
    construct_all_tilings, construct_multi_tiling, construct_tiling, ConstructionCensus,
    DEFAULT_WORK_CAP,
};
pub use count::count_construction_tilings;
pub use exact_cover::{enumerate_all_tilings, EnumerationLimits, ExhaustionCertificate, TilingCensus};
pub use verify::{verify_tiling, VerificationReport, Violation};

use std::fmt;
use std::str::FromStr;

use crate::coefficients::CoefficientError;
use crate::fsequence::SequenceError;
use crate::geometry::{Block, GeometryError, Layer, ShapeFamily};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TilingError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error("splitting coefficients for ({k}, {m}) do not reproduce the top level: {lambda_k} * {k_term} + {lambda_m} * {m_term} != {n_term}")]
    InconsistentSplit {
        k: usize,
        m: usize,
        lambda_k: Nat,
        lambda_m: Nat,
        k_term: Nat,
        m_term: Nat,
        n_term: Nat,
    },
    #[error("level of {size} vertices cannot be cut into blocks of {part}")]
    Indivisible { size: usize, part: usize },
    #[error("{what} exceeds the work cap of {cap}")]
    WorkCap { what: String, cap: u64 },
    #[error("{0} is too large to evaluate")]
    TooLarge(String),
}

type Result<T> = std::result::Result<T, TilingError>;

/// How the construction picks which top-level vertices go into each batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ChoiceStrategy {
    /// Batches take the lowest free labels in order.
    #[default]
    LowestLabels,
    /// Every choice, as used by [`construct_all_tilings`]. A single
    /// construction with this strategy makes the lowest-label choices.
    Exhaustive,
    /// Labels are shuffled by a ChaCha generator seeded with the value.
    Seeded(u64),
}

impl fmt::Display for ChoiceStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoiceStrategy::LowestLabels => f.write_str("lowest"),
            ChoiceStrategy::Exhaustive => f.write_str("all"),
            ChoiceStrategy::Seeded(seed) => write!(f, "seed:{seed}"),
        }
    }
}

impl FromStr for ChoiceStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lowest" => Ok(ChoiceStrategy::LowestLabels),
            "all" | "exhaustive" => Ok(ChoiceStrategy::Exhaustive),
            _ => s
                .strip_prefix("seed:")
                .and_then(|n| n.parse().ok())
                .map(ChoiceStrategy::Seeded)
                .ok_or_else(|| format!("unknown strategy `{s}`; use lowest, seed:N or all")),
        }
    }
}

/// A set of blocks meant to tile a layer.
///
/// Blocks are kept sorted, so two tilings with the same blocks compare
/// equal whatever produced them. A `Tiling` is not checked on creation; see
/// [`verify_tiling`].
#[derive(Debug, Clone)]
pub struct Tiling {
    layer: Layer,
    shape: ShapeFamily,
    blocks: Vec<Block>,
    provenance: String,
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.layer.span() == other.layer.span()
            && self.shape == other.shape
            && self.blocks == other.blocks
    }
}

impl Eq for Tiling {}

impl Tiling {
    pub fn new(layer: Layer, shape: ShapeFamily, mut blocks: Vec<Block>, provenance: impl Into<String>) -> Self {
        blocks.sort();
        Tiling {
            layer,
            shape,
            blocks,
            provenance: provenance.into(),
        }
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn shape(&self) -> &ShapeFamily {
        &self.shape
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    /// How the tiling was produced, e.g. `construct:lowest` or `exhaustive`.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn verify(&self, cap: u64) -> VerificationReport {
        verify_tiling(&self.layer, self, cap)
    }
}
