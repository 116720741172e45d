//! Cobweb layers, maximal paths and blocks.
//!
//! The layer `<k -> n>` has levels `Φ_s = {1, ..., s_F}` for `s = k..=n`,
//! with every vertex of one level joined to every vertex of the next. A
//! maximal path picks one vertex per level, so the paths of a layer are the
//! points of the F-box `[k_F] x ... x [n_F]`.
//!
//! A block keeps one vertex subset per level. Its maximal paths are the
//! product of those subsets, so two blocks share a path exactly when their
//! subsets meet on every level. Blocks never materialize their path sets.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coefficients;
use crate::fsequence::{is_permutation, Composition, FSequence, SequenceError};
use crate::Nat;

/// Vertex label within a level, starting at 1.
pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("invalid layer range <{k} -> {n}>: need 1 <= k <= n")]
    InvalidRange { k: usize, n: usize },
    #[error("level {level} has more vertices than labels allow")]
    LevelTooLarge { level: usize },
    #[error("{what} of {size} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, size: String, cap: u64 },
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("label {label} is outside level {level}")]
    OutOfRange { level: usize, label: Label },
    #[error("level {level} repeats a vertex")]
    DuplicateVertex { level: usize },
    #[error("level {level} needs {expected} vertices, got {got}")]
    CardinalityMismatch { level: usize, expected: usize, got: usize },
    #[error("invalid orientation {0:?}")]
    InvalidSigma(Vec<usize>),
    #[error("blocks span different layers: {a:?} vs {b:?}")]
    SpanMismatch { a: [usize; 2], b: [usize; 2] },
    #[error("shape {shape} does not fit layer <{k} -> {n}>")]
    ShapeMismatch { shape: String, k: usize, n: usize },
}

type Result<T> = std::result::Result<T, GeometryError>;

/// The cobweb layer `<k -> n>` of an F-sequence, equivalently the F-box
/// `V_{m,n}` with `m = n - k + 1`.
#[derive(Debug, Clone)]
pub struct Layer {
    seq: FSequence,
    k: usize,
    n: usize,
    sizes: Vec<usize>,
}

impl Layer {
    pub fn new(seq: &FSequence, k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(GeometryError::InvalidRange { k, n });
        }
        let sizes = (k..=n)
            .map(|s| {
                let size = seq.term_usize(s)?;
                if size > Label::MAX as usize {
                    return Err(GeometryError::LevelTooLarge { level: s });
                }
                Ok(size)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Layer {
            seq: seq.clone(),
            k,
            n,
            sizes,
        })
    }

    pub fn seq(&self) -> &FSequence {
        &self.seq
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn span(&self) -> [usize; 2] {
        [self.k, self.n]
    }

    /// Number of levels, `m = n - k + 1`.
    pub fn height(&self) -> usize {
        self.sizes.len()
    }

    /// Level sizes from the bottom level `k` to the top level `n`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of maximal paths, `n_F (n-1)_F ... k_F`.
    pub fn volume(&self) -> Nat {
        coefficients::falling_f_factorial(&self.seq, self.n, self.height())
            .expect("layer terms exist")
    }

    /// The volume as a machine integer, if it is at most `cap`.
    pub fn volume_within(&self, cap: u64) -> Result<usize> {
        let volume = self.volume();
        match volume.to_u64() {
            Some(v) if v <= cap => Ok(v as usize),
            _ => Err(GeometryError::CapExceeded {
                what: "layer volume",
                size: volume.to_string(),
                cap,
            }),
        }
    }

    /// Counts maximal paths by walking all of them.
    pub fn count_max_paths(&self, cap: u64) -> Result<Nat> {
        self.volume_within(cap)?;
        Ok(Nat::from(self.max_paths().count()))
    }

    /// All maximal paths in lexicographic order.
    pub fn max_paths(&self) -> impl Iterator<Item = MaxPath> + '_ {
        self.sizes
            .iter()
            .map(|&size| 1..=size as Label)
            .multi_cartesian_product()
            .map(MaxPath)
    }

    /// Position of a path in [`max_paths`](Self::max_paths) order.
    pub fn path_rank(&self, path: &[Label]) -> usize {
        path.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&v, &size)| acc * size + (v as usize - 1))
    }

    fn check_coordinates(&self, coords: &[Label]) -> Result<()> {
        if coords.len() != self.height() {
            return Err(GeometryError::WrongLength {
                expected: self.height(),
                got: coords.len(),
            });
        }
        for (i, (&v, &size)) in coords.iter().zip(&self.sizes).enumerate() {
            if v == 0 || v as usize > size {
                return Err(GeometryError::OutOfRange {
                    level: self.k + i,
                    label: v,
                });
            }
        }
        Ok(())
    }

    /// The maximal path through the vertices named by a point of the F-box.
    pub fn point_to_path(&self, point: &Point) -> Result<MaxPath> {
        self.check_coordinates(&point.0)?;
        Ok(MaxPath(point.0.clone()))
    }

    pub fn path_to_point(&self, path: &MaxPath) -> Result<Point> {
        self.check_coordinates(&path.0)?;
        Ok(Point(path.0.clone()))
    }
}

/// A point `(x_k, ..., x_n)` of the F-box, `x_s` in `[s_F]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Label>);

/// A maximal path `(v_k, ..., v_n)` of a layer, one vertex per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxPath(pub Vec<Label>);

/// The kind of block a tiling uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeFamily {
    /// Blocks `σP_m` of a layer with `m` levels.
    Plain(usize),
    /// Multi-blocks `σP_{b_1,...,b_k}` of the layer `<1 -> b_1 + ... + b_k>`.
    Multi(Composition),
}

impl ShapeFamily {
    /// Number of levels a block of this family has.
    pub fn height(&self) -> usize {
        match self {
            ShapeFamily::Plain(m) => *m,
            ShapeFamily::Multi(c) => c.total(),
        }
    }

    /// Index vector `<1..m>` or `<1..b_1, 1..b_2, ...>`; a block's level
    /// sizes are the terms at these indices in some order.
    pub fn base(&self) -> Vec<usize> {
        match self {
            ShapeFamily::Plain(m) => (1..=*m).collect(),
            ShapeFamily::Multi(c) => c.parts().iter().flat_map(|&b| 1..=b).collect(),
        }
    }

    pub fn base_sizes(&self, seq: &FSequence) -> Result<Vec<usize>> {
        Ok(self
            .base()
            .into_iter()
            .map(|i| seq.term_usize(i))
            .collect::<std::result::Result<_, _>>()?)
    }

    /// Paths per block: `m_F!` or `(b_1)_F! ... (b_k)_F!`.
    pub fn block_path_count(&self, seq: &FSequence) -> Result<Nat> {
        Ok(match self {
            ShapeFamily::Plain(m) => seq.factorial(*m)?,
            ShapeFamily::Multi(c) => {
                let mut acc = Nat::one();
                for &b in c.parts() {
                    acc *= seq.factorial(b)?;
                }
                acc
            }
        })
    }

    /// Number of blocks in a tiling of `layer`.
    pub fn tiling_size(&self, layer: &Layer) -> std::result::Result<Nat, coefficients::CoefficientError> {
        match self {
            ShapeFamily::Plain(m) => coefficients::fnomial(layer.seq(), layer.n(), *m),
            ShapeFamily::Multi(c) => coefficients::multi_fnomial(layer.seq(), c),
        }
    }

    /// Errors unless blocks of this family live in `layer`.
    pub fn check_fits(&self, layer: &Layer) -> Result<()> {
        let fits = match self {
            ShapeFamily::Plain(m) => *m == layer.height(),
            ShapeFamily::Multi(c) => layer.k() == 1 && c.total() == layer.n(),
        };
        if fits {
            Ok(())
        } else {
            Err(GeometryError::ShapeMismatch {
                shape: self.to_string(),
                k: layer.k(),
                n: layer.n(),
            })
        }
    }
}

impl std::fmt::Display for ShapeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShapeFamily::Plain(m) => write!(f, "P_{m}"),
            ShapeFamily::Multi(c) => write!(f, "P_{c}"),
        }
    }
}

/// A block form with its orientation: level `s` of the block has
/// `(base[sigma[s] - 1])_F` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockShape {
    family: ShapeFamily,
    sigma: Vec<usize>,
}

impl BlockShape {
    /// `sigma` is 1-based and must permute `1..=family.height()`.
    pub fn new(family: ShapeFamily, sigma: Vec<usize>) -> Result<Self> {
        if !is_one_based_permutation(&sigma, family.height()) {
            return Err(GeometryError::InvalidSigma(sigma));
        }
        Ok(BlockShape { family, sigma })
    }

    pub fn plain(m: usize, sigma: Vec<usize>) -> Result<Self> {
        Self::new(ShapeFamily::Plain(m), sigma)
    }

    pub fn multi(c: Composition, sigma: Vec<usize>) -> Result<Self> {
        Self::new(ShapeFamily::Multi(c), sigma)
    }

    pub fn family(&self) -> &ShapeFamily {
        &self.family
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Level sizes, bottom to top.
    pub fn sizes(&self, seq: &FSequence) -> Result<Vec<usize>> {
        let base = self.family.base_sizes(seq)?;
        Ok(self.sigma.iter().map(|&i| base[i - 1]).collect())
    }
}

pub(crate) fn is_one_based_permutation(sigma: &[usize], len: usize) -> bool {
    let zero_based: Vec<usize> = sigma.iter().map(|&i| i.wrapping_sub(1)).collect();
    is_permutation(&zero_based, len)
}

/// A cobweb block: one vertex subset per level of a layer.
///
/// Blocks compare, hash and order by span and level subsets only; `sigma`
/// records the orientation the block was built with.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Block {
    pub(crate) span: [usize; 2],
    pub(crate) levels: Vec<Vec<Label>>,
    #[serde(default)]
    pub(crate) sigma: Vec<usize>,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.span == other.span && self.levels == other.levels
    }
}

impl Eq for Block {}

impl Hash for Block {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.span.hash(state);
        self.levels.hash(state);
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.span, &self.levels).cmp(&(other.span, &other.levels))
    }
}

impl Block {
    /// Builds a block without validation; levels must already be sorted.
    pub(crate) fn from_parts(span: [usize; 2], levels: Vec<Vec<Label>>, sigma: Vec<usize>) -> Self {
        Block { span, levels, sigma }
    }

    pub fn span(&self) -> [usize; 2] {
        self.span
    }

    /// Vertex subsets from the bottom level up, each sorted.
    pub fn levels(&self) -> &[Vec<Label>] {
        &self.levels
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Size of the block: the number of its maximal paths.
    pub fn path_count(&self) -> Nat {
        self.levels.iter().map(|l| Nat::from(l.len())).product()
    }

    pub fn contains_path(&self, path: &[Label]) -> bool {
        path.len() == self.levels.len()
            && self
                .levels
                .iter()
                .zip(path)
                .all(|(level, v)| level.binary_search(v).is_ok())
    }

    /// The block's maximal paths, lexicographically.
    pub fn max_paths(&self) -> impl Iterator<Item = Vec<Label>> + '_ {
        self.levels
            .iter()
            .map(|l| l.iter().copied())
            .multi_cartesian_product()
    }
}

/// Validates subsets against a layer and a block form.
///
/// Subsets may be given in any order; they are stored sorted.
pub fn make_block(layer: &Layer, shape: &BlockShape, subsets: Vec<Vec<Label>>) -> Result<Block> {
    shape.family.check_fits(layer)?;
    let sizes = shape.sizes(layer.seq())?;
    if subsets.len() != layer.height() {
        return Err(GeometryError::WrongLength {
            expected: layer.height(),
            got: subsets.len(),
        });
    }
    let mut levels = Vec::with_capacity(subsets.len());
    for (i, mut subset) in subsets.into_iter().enumerate() {
        let level = layer.k() + i;
        subset.sort_unstable();
        if subset.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeometryError::DuplicateVertex { level });
        }
        if let Some(&bad) = subset.iter().find(|&&v| v == 0 || v as usize > layer.sizes()[i]) {
            return Err(GeometryError::OutOfRange { level, label: bad });
        }
        if subset.len() != sizes[i] {
            return Err(GeometryError::CardinalityMismatch {
                level,
                expected: sizes[i],
                got: subset.len(),
            });
        }
        levels.push(subset);
    }
    Ok(Block::from_parts(layer.span(), levels, shape.sigma.clone()))
}

fn sorted_disjoint(a: &[Label], b: &[Label]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => return false,
        }
    }
    true
}

/// True when the blocks share no maximal path, i.e. some level of one is
/// disjoint from the same level of the other.
pub fn blocks_disjoint(a: &Block, b: &Block) -> Result<bool> {
    if a.span != b.span || a.levels.len() != b.levels.len() {
        return Err(GeometryError::SpanMismatch { a: a.span, b: b.span });
    }
    Ok(disjoint_unchecked(a, b))
}

pub(crate) fn disjoint_unchecked(a: &Block, b: &Block) -> bool {
    a.levels
        .iter()
        .zip(&b.levels)
        .any(|(x, y)| sorted_disjoint(x, y))
}

/// Every block of a shape family in a layer.
#[derive(Debug, Clone)]
pub struct BlockEnumeration {
    /// Distinct blocks, sorted.
    pub blocks: Vec<Block>,
    /// Number of `(σ, subsets)` pairs, counting a block once per orientation
    /// that produces it.
    pub pair_count: Nat,
}

pub(crate) fn binomial(n: usize, k: usize) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut acc = Nat::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Orientations of a family in a layer, one per distinct level-size vector,
/// paired with the number of orientations sharing it.
fn orientations(layer: &Layer, family: &ShapeFamily) -> Result<Vec<(Vec<usize>, Vec<usize>, usize)>> {
    family.check_fits(layer)?;
    let base = family.base_sizes(layer.seq())?;
    let mut seen: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for perm in (0..base.len()).permutations(base.len()) {
        let sizes: Vec<usize> = perm.iter().map(|&i| base[i]).collect();
        if sizes.iter().zip(layer.sizes()).any(|(s, l)| s > l) {
            continue;
        }
        match index.get(&sizes) {
            Some(&slot) => {
                let entry: &mut (Vec<usize>, Vec<usize>, usize) = &mut seen[slot];
                entry.2 += 1;
            }
            None => {
                index.insert(sizes.clone(), seen.len());
                let sigma = perm.iter().map(|&i| i + 1).collect();
                seen.push((sizes, sigma, 1));
            }
        }
    }
    Ok(seen)
}

/// Counts `(σ, subsets)` pairs and distinct blocks without listing them.
pub fn count_blocks(layer: &Layer, family: &ShapeFamily) -> Result<(Nat, Nat)> {
    let mut pairs = Nat::zero();
    let mut distinct = Nat::zero();
    for (sizes, _, multiplicity) in orientations(layer, family)? {
        let ways: Nat = sizes
            .iter()
            .zip(layer.sizes())
            .map(|(&s, &l)| binomial(l, s))
            .product();
        pairs += &ways * multiplicity;
        distinct += ways;
    }
    Ok((pairs, distinct))
}

/// Lists every block of `family` in `layer`, refusing when more than `cap`
/// distinct blocks would be produced.
pub fn enumerate_blocks(layer: &Layer, family: &ShapeFamily, cap: u64) -> Result<BlockEnumeration> {
    let (pair_count, distinct) = count_blocks(layer, family)?;
    if distinct > Nat::from(cap) {
        return Err(GeometryError::CapExceeded {
            what: "block family size",
            size: distinct.to_string(),
            cap,
        });
    }
    let mut blocks = Vec::new();
    let mut seen = HashSet::new();
    for (sizes, sigma, _) in orientations(layer, family)? {
        let per_level = sizes
            .iter()
            .zip(layer.sizes())
            .map(|(&s, &l)| (1..=l as Label).combinations(s).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        for levels in per_level.iter().map(|c| c.iter().cloned()).multi_cartesian_product() {
            let block = Block::from_parts(layer.span(), levels, sigma.clone());
            if seen.insert(block.clone()) {
                blocks.push(block);
            }
        }
    }
    blocks.sort();
    Ok(BlockEnumeration { blocks, pair_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> FSequence {
        FSequence::natural()
    }

    fn path_set(b: &Block) -> HashSet<Vec<Label>> {
        b.max_paths().collect()
    }

    #[test]
    fn build_layer_examples() {
        assert_eq!(Layer::new(&nat(), 2, 4).unwrap().sizes(), &[2, 3, 4]);
        assert_eq!(Layer::new(&nat(), 6, 6).unwrap().sizes(), &[6]);
        assert_eq!(Layer::new(&FSequence::fibonacci(), 1, 5).unwrap().sizes(), &[1, 1, 2, 3, 5]);
        assert_eq!(
            Layer::new(&nat(), 3, 2).unwrap_err(),
            GeometryError::InvalidRange { k: 3, n: 2 }
        );
        assert!(Layer::new(&nat(), 0, 2).is_err());
        assert!(Layer::new(&FSequence::table([1u32, 2]).unwrap(), 1, 3).is_err());
    }

    #[test]
    fn volumes() {
        let l = Layer::new(&nat(), 2, 4).unwrap();
        assert_eq!(l.volume(), Nat::from(24u32));
        assert_eq!(l.count_max_paths(1000).unwrap(), Nat::from(24u32));
        assert!(l.count_max_paths(10).is_err());
        let single = Layer::new(&FSequence::fp(2).unwrap(), 5, 5).unwrap();
        assert_eq!(single.volume(), Nat::from(29u32));
        assert_eq!(Layer::new(&nat(), 1, 4).unwrap().volume(), Nat::from(24u32));
    }

    #[test]
    fn point_path_bijection() {
        let l = Layer::new(&nat(), 2, 4).unwrap();
        let paths: Vec<MaxPath> = l.max_paths().collect();
        assert_eq!(paths.len(), 24);
        let mut images = HashSet::new();
        for (rank, path) in paths.iter().enumerate() {
            let point = l.path_to_point(path).unwrap();
            assert_eq!(&l.point_to_path(&point).unwrap(), path);
            assert_eq!(l.path_rank(&path.0), rank);
            images.insert(l.point_to_path(&point).unwrap());
        }
        assert_eq!(images.len(), 24);

        let single = Layer::new(&nat(), 3, 3).unwrap();
        assert_eq!(single.point_to_path(&Point(vec![2])).unwrap(), MaxPath(vec![2]));
        assert!(l.point_to_path(&Point(vec![3, 1, 1])).is_err());
        assert!(l.point_to_path(&Point(vec![1, 1])).is_err());
    }

    #[test]
    fn make_block_examples() {
        let l = Layer::new(&nat(), 3, 4).unwrap();
        let b = make_block(&l, &BlockShape::plain(2, vec![1, 2]).unwrap(), vec![vec![2], vec![4, 1]]).unwrap();
        assert_eq!(b.sizes(), vec![1, 2]);
        assert_eq!(b.levels()[1], vec![1, 4]);
        let b = make_block(&l, &BlockShape::plain(2, vec![2, 1]).unwrap(), vec![vec![1, 3], vec![4]]).unwrap();
        assert_eq!(b.sizes(), vec![2, 1]);
        assert!(matches!(
            make_block(&l, &BlockShape::plain(2, vec![1, 2]).unwrap(), vec![vec![1, 2], vec![4]]),
            Err(GeometryError::CardinalityMismatch { .. })
        ));
        assert!(matches!(
            make_block(&l, &BlockShape::plain(2, vec![1, 2]).unwrap(), vec![vec![4], vec![1, 2]]),
            Err(GeometryError::OutOfRange { level: 3, label: 4 })
        ));
        assert!(BlockShape::plain(2, vec![1, 1]).is_err());

        let whole = Layer::new(&nat(), 1, 4).unwrap();
        let shape = BlockShape::multi("2,2".parse().unwrap(), vec![1, 2, 3, 4]).unwrap();
        let b = make_block(&whole, &shape, vec![vec![1], vec![1, 2], vec![3], vec![1, 4]]).unwrap();
        assert_eq!(b.sizes(), vec![1, 2, 1, 2]);
        assert_eq!(b.path_count(), Nat::from(4u32));
    }

    #[test]
    fn disjointness_examples() {
        let a = Block::from_parts([2, 3], vec![vec![1], vec![1, 2]], vec![1, 2]);
        let b = Block::from_parts([2, 3], vec![vec![1], vec![3]], vec![1, 2]);
        assert!(!blocks_disjoint(&a, &a).unwrap());
        assert!(blocks_disjoint(&a, &b).unwrap());
        assert!(path_set(&a).is_disjoint(&path_set(&b)));
        let c = Block::from_parts([3, 4], vec![vec![1], vec![3]], vec![1, 2]);
        assert!(blocks_disjoint(&a, &c).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let l = Layer::new(&nat(), 3, 4).unwrap();
        let e = enumerate_blocks(&l, &ShapeFamily::Plain(2), 1000).unwrap();
        assert_eq!(e.pair_count, Nat::from(30u32));
        assert_eq!(e.blocks.len(), 30);

        let single = Layer::new(&nat(), 5, 5).unwrap();
        let e = enumerate_blocks(&single, &ShapeFamily::Plain(1), 1000).unwrap();
        assert_eq!(e.blocks.len(), 5);

        let fib = Layer::new(&FSequence::fibonacci(), 1, 3).unwrap();
        let e = enumerate_blocks(&fib, &ShapeFamily::Plain(3), 1000).unwrap();
        assert_eq!(e.pair_count, Nat::from(2u32));
        assert_eq!(e.blocks.len(), 1);

        assert!(enumerate_blocks(&l, &ShapeFamily::Plain(2), 10).is_err());
        assert!(enumerate_blocks(&l, &ShapeFamily::Plain(3), 1000).is_err());
    }

    #[test]
    fn level_disjointness_matches_path_sets() {
        let l = Layer::new(&nat(), 2, 4).unwrap();
        let blocks = enumerate_blocks(&l, &ShapeFamily::Plain(3), 10_000).unwrap().blocks;
        let sets: Vec<_> = blocks.iter().map(path_set).collect();
        for (i, a) in blocks.iter().enumerate().step_by(7) {
            assert_eq!(sets[i].len(), 6);
            for (j, b) in blocks.iter().enumerate() {
                assert_eq!(blocks_disjoint(a, b).unwrap(), sets[i].is_disjoint(&sets[j]));
            }
        }
    }
}
