//! The recursive construction.
//!
//! Sub-problems are layers `<a -> a + m - 1>`, written `(a, m)`. With
//! `n = a + m - 1` the top level splits as
//! `n_F = λ_K (a-1)_F + λ_M m_F` (splitting coefficients of `(a-1, m)`):
//!
//! - λ_M batches of `m_F` top vertices each crown a tiling of `(a, m-1)`;
//! - λ_K batches of `(a-1)_F` top vertices each act as the bottom level of
//!   a tiling of `(a-1, m)`, whose blocks are then rotated so that level
//!   ends up on top.
//!
//! Only the top level is ever relabeled, so sub-tilings are built in the
//! labels of the layer itself.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ChoiceStrategy, Result, Tiling, TilingError};
use crate::fsequence::{Composition, FSequence};
use crate::geometry::{Block, Label, Layer, ShapeFamily};
use crate::Nat;

/// Default bound on candidate tilings produced by [`construct_all_tilings`].
pub const DEFAULT_WORK_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Local {
    levels: Vec<Vec<Label>>,
    sigma: Vec<usize>,
}

type Blocks = Vec<Local>;

fn to_usize(value: &Nat, what: &str) -> Result<usize> {
    value
        .to_usize()
        .ok_or_else(|| TilingError::TooLarge(what.to_string()))
}

/// Terms and batch counts for one recursion step of `(a, m)`.
struct Split {
    top: usize,
    step_one: (usize, usize),
    step_two: (usize, usize),
}

fn split(seq: &FSequence, a: usize, m: usize) -> Result<Split> {
    let n = a + m - 1;
    let pair = seq.lambda_split(a - 1, m)?;
    let (k_term, m_term, n_term) = (seq.term(a - 1)?, seq.term(m)?, seq.term(n)?);
    if &pair.lambda_k * &k_term + &pair.lambda_m * &m_term != n_term {
        return Err(TilingError::InconsistentSplit {
            k: a - 1,
            m,
            lambda_k: pair.lambda_k,
            lambda_m: pair.lambda_m,
            k_term,
            m_term,
            n_term,
        });
    }
    Ok(Split {
        top: to_usize(&n_term, "top level")?,
        step_one: (to_usize(&pair.lambda_m, "λ_M")?, to_usize(&m_term, "batch")?),
        step_two: (to_usize(&pair.lambda_k, "λ_K")?, to_usize(&k_term, "batch")?),
    })
}

fn whole_layer(seq: &FSequence, m: usize) -> Result<Local> {
    let levels = (1..=m)
        .map(|s| Ok((1..=seq.term_usize(s)? as Label).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Local {
        levels,
        sigma: (1..=m).collect(),
    })
}

fn crown<'a>(sub: &'a [Local], batch: &[Label], m: usize) -> impl Iterator<Item = Local> + 'a {
    let batch = batch.to_vec();
    sub.iter().map(move |b| {
        let mut levels = b.levels.clone();
        levels.push(batch.clone());
        let mut sigma = b.sigma.clone();
        sigma.push(m);
        Local { levels, sigma }
    })
}

fn rotate<'a>(sub: &'a [Local], batch: &[Label]) -> impl Iterator<Item = Local> + 'a {
    let batch = batch.to_vec();
    sub.iter().map(move |b| {
        let mut levels = b.levels[1..].to_vec();
        levels.push(b.levels[0].iter().map(|&v| batch[v as usize - 1]).collect());
        let mut sigma = b.sigma[1..].to_vec();
        sigma.push(b.sigma[0]);
        Local { levels, sigma }
    })
}

struct Builder<'a> {
    seq: &'a FSequence,
    rng: Option<ChaCha8Rng>,
    memo: HashMap<(usize, usize), Blocks>,
}

impl Builder<'_> {
    fn order(&mut self, size: usize) -> Vec<Label> {
        let mut labels: Vec<Label> = (1..=size as Label).collect();
        if let Some(rng) = &mut self.rng {
            labels.shuffle(rng);
        }
        labels
    }

    fn build(&mut self, a: usize, m: usize) -> Result<Blocks> {
        if self.rng.is_none() {
            if let Some(done) = self.memo.get(&(a, m)) {
                return Ok(done.clone());
            }
        }
        let blocks = self.build_uncached(a, m)?;
        if self.rng.is_none() {
            self.memo.insert((a, m), blocks.clone());
        }
        Ok(blocks)
    }

    fn build_uncached(&mut self, a: usize, m: usize) -> Result<Blocks> {
        if m == 1 {
            let size = self.seq.term_usize(a)?;
            let part = self.seq.term_usize(1)?;
            if size % part != 0 {
                return Err(TilingError::Indivisible { size, part });
            }
            let order = self.order(size);
            return Ok(order
                .chunks(part)
                .map(|c| Local {
                    levels: vec![sorted(c)],
                    sigma: vec![1],
                })
                .collect());
        }
        if a == 1 {
            return Ok(vec![whole_layer(self.seq, m)?]);
        }
        let split = split(self.seq, a, m)?;
        let order = self.order(split.top);
        let mut out = Vec::new();
        let mut cursor = 0;
        let (count, size) = split.step_one;
        for _ in 0..count {
            let sub = self.build(a, m - 1)?;
            out.extend(crown(&sub, &sorted(&order[cursor..cursor + size]), m));
            cursor += size;
        }
        let (count, size) = split.step_two;
        for _ in 0..count {
            let sub = self.build(a - 1, m)?;
            out.extend(rotate(&sub, &sorted(&order[cursor..cursor + size])));
            cursor += size;
        }
        debug_assert_eq!(cursor, split.top);
        Ok(out)
    }

    /// Multi-blocks of `<1 -> Σ remaining>`; `remaining[s]` counts the
    /// entries of segment `s` still to place, `starts[s]` is the segment's
    /// offset in the base vector.
    fn build_multi(&mut self, remaining: &[usize], starts: &[usize], memo: &mut HashMap<Vec<usize>, Blocks>) -> Result<Blocks> {
        let n: usize = remaining.iter().sum();
        if n == 0 {
            return Ok(vec![Local {
                levels: Vec::new(),
                sigma: Vec::new(),
            }]);
        }
        if self.rng.is_none() {
            if let Some(done) = memo.get(remaining) {
                return Ok(done.clone());
            }
        }
        let active: Vec<usize> = (0..remaining.len()).filter(|&s| remaining[s] > 0).collect();
        let parts = Composition::new(active.iter().map(|&s| remaining[s]).collect())?;
        let lambdas = self.seq.lambda_composition(&parts)?;
        let order = self.order(self.seq.term_usize(n)?);
        let mut out = Vec::new();
        let mut cursor = 0;
        for (&s, lambda) in active.iter().zip(&lambdas) {
            let count = to_usize(lambda, "λ_s")?;
            if count == 0 {
                continue;
            }
            let size = self.seq.term_usize(remaining[s])?;
            let entry = starts[s] + remaining[s];
            let mut reduced = remaining.to_vec();
            reduced[s] -= 1;
            for _ in 0..count {
                let sub = self.build_multi(&reduced, starts, memo)?;
                out.extend(crown(&sub, &sorted(&order[cursor..cursor + size]), entry));
                cursor += size;
            }
        }
        if self.rng.is_none() {
            memo.insert(remaining.to_vec(), out.clone());
        }
        Ok(out)
    }
}

fn sorted(labels: &[Label]) -> Vec<Label> {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v
}

fn provenance(strategy: ChoiceStrategy) -> String {
    match strategy {
        ChoiceStrategy::Exhaustive => "construct:lowest".to_string(),
        other => format!("construct:{other}"),
    }
}

fn rng_for(strategy: ChoiceStrategy) -> Option<ChaCha8Rng> {
    match strategy {
        ChoiceStrategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    }
}

fn into_blocks(layer: &Layer, local: Blocks) -> Vec<Block> {
    local
        .into_iter()
        .map(|b| Block::from_parts(layer.span(), b.levels, b.sigma))
        .collect()
}

/// Tiles `<k -> n>` with blocks `σP_m`, `m = n - k + 1`.
///
/// ```
/// use cobweb::{tiling, ChoiceStrategy, FSequence};
///
/// let t = tiling::construct_tiling(&FSequence::natural(), 3, 4, ChoiceStrategy::LowestLabels).unwrap();
/// assert_eq!(t.len(), 6);
/// assert!(t.verify(10_000).valid);
/// ```
pub fn construct_tiling(seq: &FSequence, k: usize, n: usize, strategy: ChoiceStrategy) -> Result<Tiling> {
    let layer = Layer::new(seq, k, n)?;
    let m = layer.height();
    let mut builder = Builder {
        seq,
        rng: rng_for(strategy),
        memo: HashMap::new(),
    };
    let blocks = builder.build(k, m)?;
    Ok(Tiling::new(
        layer.clone(),
        ShapeFamily::Plain(m),
        into_blocks(&layer, blocks),
        provenance(strategy),
    ))
}

/// Tiles `<1 -> n>` with multi-blocks `σP_c`, `n = c.total()`.
pub fn construct_multi_tiling(seq: &FSequence, c: &Composition, strategy: ChoiceStrategy) -> Result<Tiling> {
    let layer = Layer::new(seq, 1, c.total())?;
    let starts: Vec<usize> = c
        .parts()
        .iter()
        .scan(0, |acc, &b| {
            let start = *acc;
            *acc += b;
            Some(start)
        })
        .collect();
    let mut builder = Builder {
        seq,
        rng: rng_for(strategy),
        memo: HashMap::new(),
    };
    let blocks = builder.build_multi(c.parts(), &starts, &mut HashMap::new())?;
    Ok(Tiling::new(
        layer.clone(),
        ShapeFamily::Multi(c.clone()),
        into_blocks(&layer, blocks),
        provenance(strategy),
    ))
}

/// Every tiling the construction can output for one layer.
#[derive(Debug, Clone)]
pub struct ConstructionCensus {
    /// Distinct tilings, sorted.
    pub tilings: Vec<Tiling>,
    /// Number of choice sequences: ordered batch assignments at every step,
    /// counted with multiplicity.
    pub choice_sequences: Nat,
}

/// Distinct sub-tilings of `(a, m)` plus their choice-sequence count.
#[derive(Clone)]
struct Family {
    tilings: Vec<Blocks>,
    choices: Nat,
}

struct Explorer<'a> {
    seq: &'a FSequence,
    cap: u64,
    memo: HashMap<(usize, usize), Family>,
}

/// Ways to cut `labels` into unordered groups of `size`; each group holds
/// the smallest label not yet used.
fn unordered_groups(labels: &[Label], size: usize) -> Vec<Vec<Vec<Label>>> {
    if labels.is_empty() {
        return vec![Vec::new()];
    }
    let (first, rest) = (labels[0], &labels[1..]);
    let mut out = Vec::new();
    for others in rest.iter().copied().combinations(size - 1) {
        let mut group = vec![first];
        group.extend(&others);
        let left: Vec<Label> = rest.iter().copied().filter(|v| !others.contains(v)).collect();
        for mut tail in unordered_groups(&left, size) {
            tail.insert(0, group.clone());
            out.push(tail);
        }
    }
    out
}

fn factorial(n: usize) -> Nat {
    (1..=n).map(Nat::from).product()
}

fn checked_work(cap: u64, factors: &[usize]) -> Result<()> {
    let total = factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f as u64));
    match total {
        Some(t) if t <= cap => Ok(()),
        _ => Err(TilingError::WorkCap {
            what: "construction choices".to_string(),
            cap,
        }),
    }
}

fn normalized(mut blocks: Blocks) -> Blocks {
    blocks.sort_by(|x, y| x.levels.cmp(&y.levels));
    blocks
}

impl Explorer<'_> {
    fn all(&mut self, a: usize, m: usize) -> Result<Family> {
        if let Some(done) = self.memo.get(&(a, m)) {
            return Ok(done.clone());
        }
        let family = self.all_uncached(a, m)?;
        self.memo.insert((a, m), family.clone());
        Ok(family)
    }

    fn all_uncached(&mut self, a: usize, m: usize) -> Result<Family> {
        if m == 1 {
            let size = self.seq.term_usize(a)?;
            let part = self.seq.term_usize(1)?;
            if size % part != 0 {
                return Err(TilingError::Indivisible { size, part });
            }
            let labels: Vec<Label> = (1..=size as Label).collect();
            let tilings: Vec<Blocks> = unordered_groups(&labels, part)
                .into_iter()
                .map(|groups| {
                    normalized(
                        groups
                            .into_iter()
                            .map(|g| Local {
                                levels: vec![g],
                                sigma: vec![1],
                            })
                            .collect(),
                    )
                })
                .collect();
            let choices = Nat::from(tilings.len());
            return Ok(Family { tilings, choices });
        }
        if a == 1 {
            return Ok(Family {
                tilings: vec![vec![whole_layer(self.seq, m)?]],
                choices: Nat::one(),
            });
        }
        let split = split(self.seq, a, m)?;
        let (c1, s1) = split.step_one;
        let (c2, s2) = split.step_two;
        let empty = Family {
            tilings: vec![Vec::new()],
            choices: Nat::one(),
        };
        let one = if c1 > 0 { self.all(a, m - 1)? } else { empty.clone() };
        let two = if c2 > 0 { self.all(a - 1, m)? } else { empty };

        let labels: Vec<Label> = (1..=split.top as Label).collect();
        let mut assignments = Vec::new();
        for first in labels.iter().copied().combinations(c1 * s1) {
            let rest: Vec<Label> = labels.iter().copied().filter(|v| !first.contains(v)).collect();
            let first_groups = unordered_groups(&first, s1.max(1));
            let second_groups = unordered_groups(&rest, s2.max(1));
            for g1 in &first_groups {
                for g2 in &second_groups {
                    assignments.push((g1.clone(), g2.clone()));
                }
            }
        }
        let mut factors = vec![assignments.len()];
        factors.extend(std::iter::repeat_n(one.tilings.len(), c1));
        factors.extend(std::iter::repeat_n(two.tilings.len(), c2));
        checked_work(self.cap, &factors)?;

        let mut seen = HashSet::new();
        let mut tilings = Vec::new();
        for (g1, g2) in &assignments {
            let mut pools: Vec<Vec<Blocks>> = Vec::with_capacity(c1 + c2);
            for batch in g1 {
                pools.push(one.tilings.iter().map(|t| crown(t, batch, m).collect()).collect());
            }
            for batch in g2 {
                pools.push(two.tilings.iter().map(|t| rotate(t, batch).collect()).collect());
            }
            for pick in pools.iter().map(|p| p.iter()).multi_cartesian_product() {
                let tiling = normalized(pick.into_iter().flatten().cloned().collect());
                let key: Vec<Vec<Vec<Label>>> = tiling.iter().map(|b| b.levels.clone()).collect();
                if seen.insert(key) {
                    tilings.push(tiling);
                }
            }
            if pools.is_empty() {
                tilings.push(Vec::new());
            }
        }
        let ordered = Nat::from(assignments.len()) * factorial(c1) * factorial(c2);
        let choices = ordered * one.choices.pow(c1 as u32) * two.choices.pow(c2 as u32);
        tilings.sort_by(|x, y| key_of(x).cmp(&key_of(y)));
        Ok(Family { tilings, choices })
    }
}

fn key_of(t: &Blocks) -> Vec<&Vec<Vec<Label>>> {
    t.iter().map(|b| &b.levels).collect()
}

/// Runs the construction under every choice and collects the distinct
/// tilings. Fails when more than `cap` candidate tilings would be built.
pub fn construct_all_tilings(seq: &FSequence, k: usize, n: usize, cap: u64) -> Result<ConstructionCensus> {
    let layer = Layer::new(seq, k, n)?;
    let m = layer.height();
    let mut explorer = Explorer {
        seq,
        cap,
        memo: HashMap::new(),
    };
    let family = explorer.all(k, m)?;
    let mut tilings: Vec<Tiling> = family
        .tilings
        .into_iter()
        .map(|t| Tiling::new(layer.clone(), ShapeFamily::Plain(m), into_blocks(&layer, t), "construct:all"))
        .collect();
    tilings.sort_by(|x, y| x.blocks().cmp(y.blocks()));
    Ok(ConstructionCensus {
        tilings,
        choice_sequences: family.choices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients;

    #[test]
    fn natural_small_layers() {
        let t = construct_tiling(&FSequence::natural(), 3, 4, ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.blocks().iter().all(|b| b.path_count() == Nat::from(2u32)));
        assert!(t.verify(10_000).valid);
    }

    #[test]
    fn single_level_is_singletons() {
        for seq in [FSequence::natural(), FSequence::fibonacci(), FSequence::fp(2).unwrap()] {
            let t = construct_tiling(&seq, 5, 5, ChoiceStrategy::LowestLabels).unwrap();
            assert_eq!(t.len(), seq.term_usize(5).unwrap());
            assert!(t.verify(10_000).valid);
        }
    }

    #[test]
    fn fibonacci_layer() {
        let fib = FSequence::fibonacci();
        let t = construct_tiling(&fib, 5, 7, ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(t.len(), 260);
        assert_eq!(Nat::from(t.len()), coefficients::fnomial(&fib, 7, 3).unwrap());
        assert!(t.verify(100_000).valid);
    }

    #[test]
    fn whole_layer_is_one_block() {
        let t = construct_tiling(&FSequence::gaussian(2).unwrap(), 1, 3, ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.blocks()[0].sizes(), vec![1, 3, 7]);
    }

    #[test]
    fn powers_skip_step_one() {
        let seq = FSequence::powers(2).unwrap();
        let t = construct_tiling(&seq, 2, 3, ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(Nat::from(t.len()), coefficients::fnomial(&seq, 3, 2).unwrap());
        assert!(t.verify(10_000).valid);
    }

    #[test]
    fn seeded_is_reproducible_and_valid() {
        let seq = FSequence::natural();
        let a = construct_tiling(&seq, 2, 5, ChoiceStrategy::Seeded(7)).unwrap();
        let b = construct_tiling(&seq, 2, 5, ChoiceStrategy::Seeded(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.provenance(), "construct:seed:7");
        assert!(a.verify(10_000).valid);
        let lowest = construct_tiling(&seq, 2, 5, ChoiceStrategy::LowestLabels).unwrap();
        assert_ne!(a, lowest);
    }

    #[test]
    fn multi_examples() {
        let nat = FSequence::natural();
        let t = construct_multi_tiling(&nat, &"2,2".parse().unwrap(), ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.verify(10_000).valid);
        let t = construct_multi_tiling(&nat, &"2,1".parse().unwrap(), ChoiceStrategy::LowestLabels).unwrap();
        assert_eq!(t.len(), 3);
        let t = construct_multi_tiling(&FSequence::fibonacci(), &"4".parse().unwrap(), ChoiceStrategy::LowestLabels)
            .unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.blocks()[0].sizes(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn unordered_group_counts() {
        let labels: Vec<Label> = (1..=6).collect();
        assert_eq!(unordered_groups(&labels, 2).len(), 15);
        assert_eq!(unordered_groups(&labels, 3).len(), 10);
        assert_eq!(unordered_groups(&labels, 1).len(), 1);
    }

    #[test]
    fn exhaustive_natural_two_three() {
        let census = construct_all_tilings(&FSequence::natural(), 2, 3, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(census.tilings.len(), 3);
        assert_eq!(census.choice_sequences, Nat::from(3u32));
        for t in &census.tilings {
            assert!(t.verify(1000).valid);
        }
    }

    #[test]
    fn exhaustive_fibonacci_collapses() {
        // every block of <3 -> 4> is a single path, so all choices agree
        let census = construct_all_tilings(&FSequence::fibonacci(), 3, 4, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(census.tilings.len(), 1);
        assert_eq!(census.choice_sequences, Nat::from(12u32));
    }
}
