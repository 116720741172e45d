use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::Tiling;
use crate::geometry::{disjoint_unchecked, is_one_based_permutation, Block, Layer};
use crate::Nat;

/// One reason a tiling fails to be valid. Block indices refer to
/// [`Tiling::blocks`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The tiling belongs to another layer.
    Layer { expected: [usize; 2], got: [usize; 2] },
    /// The block does not have a legal shape for the tiling's family.
    Shape { block: usize, reason: String },
    /// Two blocks share a maximal path.
    Overlap { first: usize, second: usize },
    /// Block sizes do not add up to the layer volume.
    PathTotal { covered: String, volume: String },
    /// Paths no block contains, found by the explicit cover check.
    Uncovered { count: usize },
    /// The number of blocks differs from the F-nomial.
    BlockCount { got: usize, expected: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Layer { expected, got } => {
                write!(f, "tiling spans {got:?}, layer is {expected:?}")
            }
            Violation::Shape { block, reason } => write!(f, "block {block}: {reason}"),
            Violation::Overlap { first, second } => {
                write!(f, "blocks {first} and {second} share a maximal path")
            }
            Violation::PathTotal { covered, volume } => {
                write!(f, "blocks hold {covered} paths, layer has {volume}")
            }
            Violation::Uncovered { count } => write!(f, "{count} paths are not covered"),
            Violation::BlockCount { got, expected } => {
                write!(f, "{got} blocks, a tiling needs {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub blocks: usize,
    /// Whether disjointness and cover were checked path by path.
    pub explicit_cover: bool,
}

fn check_shape(layer: &Layer, tiling: &Tiling, block: &Block, base: &[usize]) -> Option<String> {
    if block.span() != layer.span() || block.height() != layer.height() {
        return Some(format!("spans {:?}", block.span()));
    }
    for (i, level) in block.levels().iter().enumerate() {
        if level.windows(2).any(|w| w[0] >= w[1]) {
            return Some(format!("level {} is not strictly increasing", layer.k() + i));
        }
        if level.iter().any(|&v| v == 0 || v as usize > layer.sizes()[i]) {
            return Some(format!("level {} has a label out of range", layer.k() + i));
        }
    }
    let sizes = block.sizes();
    let sigma = block.sigma();
    if sigma.is_empty() {
        let mut got = sizes.clone();
        let mut want = base.to_vec();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Some(format!("level sizes {sizes:?} are not a rearrangement of {base:?}"));
        }
    } else {
        if !is_one_based_permutation(sigma, base.len()) {
            return Some(format!("orientation {sigma:?} is not a permutation"));
        }
        let want: Vec<usize> = sigma.iter().map(|&i| base[i - 1]).collect();
        if sizes != want {
            return Some(format!(
                "level sizes {sizes:?} do not match orientation {sigma:?} of {}",
                tiling.shape()
            ));
        }
    }
    None
}

/// Checks that `tiling` is a tiling of `layer`.
///
/// Every block must have a legal shape, no two blocks may share a maximal
/// path, and together they must hold every path. When the volume is at
/// most `cap` the cover is checked path by path; otherwise disjointness is
/// checked pairwise and cover follows from the path total.
pub fn verify_tiling(layer: &Layer, tiling: &Tiling, cap: u64) -> VerificationReport {
    let mut violations = Vec::new();
    if tiling.layer().span() != layer.span() {
        violations.push(Violation::Layer {
            expected: layer.span(),
            got: tiling.layer().span(),
        });
        return report(violations, tiling.len(), false);
    }
    let shape = tiling.shape();
    let base = match shape.check_fits(layer).and_then(|_| shape.base_sizes(layer.seq())) {
        Ok(base) => base,
        Err(e) => {
            violations.push(Violation::Shape {
                block: 0,
                reason: e.to_string(),
            });
            return report(violations, tiling.len(), false);
        }
    };
    let blocks = tiling.blocks();
    let mut well_formed = true;
    for (i, block) in blocks.iter().enumerate() {
        if let Some(reason) = check_shape(layer, tiling, block, &base) {
            violations.push(Violation::Shape { block: i, reason });
            well_formed = false;
        }
    }

    if let Ok(expected) = shape.tiling_size(layer) {
        if Nat::from(blocks.len()) != expected {
            violations.push(Violation::BlockCount {
                got: blocks.len(),
                expected: expected.to_string(),
            });
        }
    }

    let volume = layer.volume();
    let covered: Nat = blocks.iter().map(Block::path_count).sum();
    if covered != volume {
        violations.push(Violation::PathTotal {
            covered: covered.to_string(),
            volume: volume.to_string(),
        });
    }
    if !well_formed {
        return report(violations, blocks.len(), false);
    }

    let explicit = volume.to_u64().is_some_and(|v| v <= cap);
    let mut overlaps = BTreeSet::new();
    if explicit {
        let mut owner = vec![usize::MAX; volume.to_usize().unwrap_or(0)];
        for (i, block) in blocks.iter().enumerate() {
            for path in block.max_paths() {
                let slot = &mut owner[layer.path_rank(&path)];
                if *slot == usize::MAX {
                    *slot = i;
                } else {
                    overlaps.insert((*slot, i));
                }
            }
        }
        let uncovered = owner.iter().filter(|&&o| o == usize::MAX).count();
        if uncovered > 0 {
            violations.push(Violation::Uncovered { count: uncovered });
        }
    } else {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !disjoint_unchecked(&blocks[i], &blocks[j]) {
                    overlaps.insert((i, j));
                }
            }
        }
    }
    violations.extend(
        overlaps
            .into_iter()
            .map(|(first, second)| Violation::Overlap { first, second }),
    );
    report(violations, blocks.len(), explicit)
}

fn report(violations: Vec<Violation>, blocks: usize, explicit_cover: bool) -> VerificationReport {
    VerificationReport {
        valid: violations.is_empty(),
        violations,
        blocks,
        explicit_cover,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsequence::FSequence;
    use crate::tiling::{construct_tiling, ChoiceStrategy};

    fn sample() -> Tiling {
        construct_tiling(&FSequence::natural(), 3, 4, ChoiceStrategy::LowestLabels).unwrap()
    }

    #[test]
    fn constructed_tiling_is_valid() {
        let t = sample();
        let r = verify_tiling(t.layer(), &t, 1000);
        assert!(r.valid, "{:?}", r.violations);
        assert!(r.explicit_cover);
        let r = verify_tiling(t.layer(), &t, 1);
        assert!(r.valid);
        assert!(!r.explicit_cover);
    }

    #[test]
    fn duplicated_block_overlaps() {
        let t = sample();
        let mut blocks = t.blocks().to_vec();
        blocks[1] = blocks[0].clone();
        let bad = Tiling::new(t.layer().clone(), t.shape().clone(), blocks, "test");
        for cap in [1000, 1] {
            let r = verify_tiling(t.layer(), &bad, cap);
            assert!(!r.valid);
            assert!(r.violations.iter().any(|v| matches!(v, Violation::Overlap { .. })));
        }
    }

    #[test]
    fn missing_block_is_a_deficit() {
        let t = sample();
        let mut blocks = t.blocks().to_vec();
        blocks.pop();
        let bad = Tiling::new(t.layer().clone(), t.shape().clone(), blocks, "test");
        let r = verify_tiling(t.layer(), &bad, 1000);
        assert!(!r.valid);
        assert!(r.violations.contains(&Violation::Uncovered { count: 2 }));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::BlockCount { got: 5, .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::PathTotal { .. })));
    }

    #[test]
    fn wrong_shape_is_reported() {
        let t = sample();
        let mut blocks = t.blocks().to_vec();
        blocks[0] = Block::from_parts([3, 4], vec![vec![1, 2], vec![1, 2]], vec![]);
        let bad = Tiling::new(t.layer().clone(), t.shape().clone(), blocks, "test");
        let r = verify_tiling(t.layer(), &bad, 1000);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Shape { .. })));
    }
}
