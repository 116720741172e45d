//! The block graph of a layer and clique search on it.
//!
//! Vertices are the distinct blocks `σP_m` of a layer and edges join blocks
//! with no maximal path in common. A tiling is a set of `d = fnomial(n, m)`
//! pairwise disjoint blocks, so tilings and cliques of size `d` are the same
//! objects; [`clique_to_tiling`] and [`tiling_to_clique`] convert between
//! them.
//!
//! ```
//! use cobweb::{blockgraph, FSequence, Layer};
//!
//! let layer = Layer::new(&FSequence::natural(), 2, 3).unwrap();
//! let graph = blockgraph::build_block_graph(&layer, 10_000).unwrap();
//! assert_eq!(graph.target(), 3);
//! let count = blockgraph::count_cliques(&graph, graph.target(), u64::MAX);
//! assert_eq!(count.count, 4);
//! ```

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::coefficients::{self, CoefficientError};
use crate::fsequence::FSequence;
use crate::geometry::{self, disjoint_unchecked, Block, GeometryError, Layer, ShapeFamily};
use crate::tiling::Tiling;
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error("tiling size {0} does not fit in memory")]
    TargetTooLarge(Nat),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {0} appears twice")]
    RepeatedVertex(usize),
    #[error("tiling of {tiling:?} does not belong to a graph on {graph:?}")]
    LayerMismatch { tiling: [usize; 2], graph: [usize; 2] },
    #[error("block {0} of the tiling is not a vertex of the graph")]
    UnknownBlock(usize),
}

type Result<T> = std::result::Result<T, GraphError>;

/// Fixed-size bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.0[i].trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }
}

/// Disjointness graph on the distinct blocks of a layer.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    layer: Layer,
    vertices: Vec<Block>,
    adjacency: Vec<Bits>,
    target: usize,
    /// For each maximal path, the vertices whose blocks contain it. Each is
    /// an independent set, and a clique of the target size meets every one.
    classes: Vec<Bits>,
    /// Path ranks of each vertex's block.
    paths: Vec<Vec<usize>>,
}

impl BlockGraph {
    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    /// Blocks in sorted order; a vertex is its index here.
    pub fn vertices(&self) -> &[Block] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Clique size that corresponds to a tiling, `fnomial(n, m)`.
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertices.len()).flat_map(move |u| self.adjacency[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bits::len).sum::<usize>() / 2
    }

    /// Index of a block among the vertices.
    pub fn vertex_of(&self, block: &Block) -> Option<usize> {
        self.vertices.binary_search(block).ok()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        self.check_clique(vertices).is_ok()
    }

    fn check_clique(&self, vertices: &[usize]) -> Result<()> {
        for (i, &u) in vertices.iter().enumerate() {
            if u >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(u));
            }
            for &v in &vertices[..i] {
                if u == v {
                    return Err(GraphError::RepeatedVertex(u));
                }
                if !self.adjacent(u, v) {
                    return Err(GraphError::NotAdjacent(v, u));
                }
            }
        }
        Ok(())
    }

    /// True when no vertex outside the clique is adjacent to all of it.
    pub fn is_maximal_clique(&self, clique: &[usize]) -> bool {
        if !self.is_clique(clique) {
            return false;
        }
        let mut common = Bits::full(self.vertices.len());
        for &v in clique {
            common = common.and(&self.adjacency[v]);
        }
        common.is_empty()
    }
}

/// The two counts of blocks `σP_m` in a layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCount {
    /// `Σ_σ Π_s C((k+s-1)_F, (σ(s))_F)`, with `σ` over permutations of
    /// `1..=m`: pairs of an orientation and a choice of subsets.
    pub pair_count: Nat,
    /// Distinct blocks after merging orientations that give equal subsets.
    pub distinct_count: Nat,
}

/// Evaluates the block-count sum and the distinct block count.
pub fn block_count_formula(seq: &FSequence, k: usize, n: usize) -> Result<BlockCount> {
    let layer = Layer::new(seq, k, n)?;
    let m = layer.height();
    let base = ShapeFamily::Plain(m).base_sizes(seq)?;
    let mut pair_count = Nat::zero();
    for sigma in (0..m).permutations(m) {
        let term: Nat = sigma
            .iter()
            .zip(layer.sizes())
            .map(|(&i, &level)| geometry::binomial(level, base[i]))
            .product();
        pair_count += term;
    }
    let (_, distinct_count) = geometry::count_blocks(&layer, &ShapeFamily::Plain(m))?;
    Ok(BlockCount {
        pair_count,
        distinct_count,
    })
}

/// Builds the graph of `layer`, refusing more than `cap` vertices.
pub fn build_block_graph(layer: &Layer, cap: u64) -> Result<BlockGraph> {
    let family = ShapeFamily::Plain(layer.height());
    let target = coefficients::fnomial(layer.seq(), layer.n(), layer.height())?;
    let target = target.to_usize().ok_or(GraphError::TargetTooLarge(target))?;
    let vertices = geometry::enumerate_blocks(layer, &family, cap)?.blocks;
    let mut adjacency = vec![Bits::new(vertices.len()); vertices.len()];
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            if disjoint_unchecked(&vertices[u], &vertices[v]) {
                adjacency[u].insert(v);
                adjacency[v].insert(u);
            }
        }
    }
    let volume = layer.volume_within(u64::MAX)?;
    let mut classes = vec![Bits::new(vertices.len()); volume];
    let paths: Vec<Vec<usize>> = vertices
        .iter()
        .map(|b| b.max_paths().map(|p| layer.path_rank(&p)).collect())
        .collect();
    for (v, ranks) in paths.iter().enumerate() {
        for &r in ranks {
            classes[r].insert(v);
        }
    }
    Ok(BlockGraph {
        layer: layer.clone(),
        vertices,
        adjacency,
        target,
        classes,
        paths,
    })
}

/// Outcome of a clique search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueSearch {
    /// A clique of the requested size, vertices ascending.
    Found(Vec<usize>),
    /// The search finished without finding one.
    None,
    /// The node budget ran out first.
    Inconclusive,
}

/// Greedy coloring of `candidates` in vertex order; returns the number of
/// colors, an upper bound on any clique inside `candidates`.
fn color_bound(graph: &BlockGraph, candidates: &Bits) -> usize {
    let mut uncolored = candidates.clone();
    let mut colors = 0;
    while !uncolored.is_empty() {
        colors += 1;
        let mut open = uncolored.clone();
        while let Some(v) = open.first() {
            uncolored.remove(v);
            open.remove(v);
            open = open.and_not(&graph.adjacency[v]);
        }
    }
    colors
}

/// Branch-and-bound for cliques of the target size. Such a clique meets
/// every path class exactly once, so each step branches on the uncovered
/// class with the fewest candidates; the coloring bound prunes the rest.
struct ClassWalk<'a> {
    graph: &'a BlockGraph,
    nodes: u64,
    budget: u64,
    aborted: bool,
    clique: Vec<usize>,
    covered: Vec<bool>,
}

impl ClassWalk<'_> {
    fn walk(&mut self, candidates: Bits, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        let size = self.graph.target;
        if self.clique.len() == size {
            return visit(&self.clique);
        }
        let need = size - self.clique.len();
        if candidates.len() < need {
            return true;
        }
        let mut branch: Option<Bits> = None;
        for (rank, class) in self.graph.classes.iter().enumerate() {
            if self.covered[rank] {
                continue;
            }
            let options = class.and(&candidates);
            let smaller = match &branch {
                Some(b) => options.len() < b.len(),
                None => true,
            };
            if smaller {
                let empty = options.is_empty();
                branch = Some(options);
                if empty {
                    return true;
                }
            }
        }
        let Some(branch) = branch else {
            return true;
        };
        if color_bound(self.graph, &candidates) < need {
            return true;
        }
        for v in branch.iter() {
            self.clique.push(v);
            for &r in &self.graph.paths[v] {
                self.covered[r] = true;
            }
            let go_on = self.walk(candidates.and(&self.graph.adjacency[v]), visit);
            for &r in &self.graph.paths[v] {
                self.covered[r] = false;
            }
            self.clique.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn class_walk(graph: &BlockGraph, budget: u64, visit: &mut dyn FnMut(&[usize]) -> bool) -> (u64, bool) {
    let mut walk = ClassWalk {
        graph,
        nodes: 0,
        budget,
        aborted: false,
        clique: Vec::new(),
        covered: vec![false; graph.classes.len()],
    };
    walk.walk(Bits::full(graph.vertex_count()), visit);
    (walk.nodes.min(budget), walk.aborted)
}

/// Searches for a clique of `size` vertices, visiting at most `budget`
/// search nodes.
pub fn find_clique(graph: &BlockGraph, size: usize, budget: u64) -> CliqueSearch {
    let mut found = None;
    let aborted = if size == graph.target {
        class_walk(graph, budget, &mut |c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            found = Some(c);
            false
        })
        .1
    } else {
        pivot_walk(graph, size, budget, &mut |held, pivots, need| {
            let mut c = held.to_vec();
            c.extend_from_slice(&pivots[..need]);
            c.sort_unstable();
            found = Some(c);
            false
        })
        .1
    };
    match found {
        Some(c) => CliqueSearch::Found(c),
        None if aborted => CliqueSearch::Inconclusive,
        None => CliqueSearch::None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCount {
    pub count: u64,
    pub nodes: u64,
    /// False when the budget ran out; `count` is then a lower bound.
    pub completed: bool,
}

/// Pivoting walk that groups cliques: every leaf holds vertices that are in
/// all of its cliques and pivots of which any `size - held` may be added.
/// Each clique of the requested size belongs to exactly one leaf.
struct PivotWalk<'a> {
    graph: &'a BlockGraph,
    size: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
    held: Vec<usize>,
    pivots: Vec<usize>,
}

impl PivotWalk<'_> {
    fn walk(&mut self, candidates: Bits, leaf: &mut dyn FnMut(&[usize], &[usize], usize) -> bool) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        if self.held.len() > self.size {
            return true;
        }
        let need = self.size - self.held.len();
        if candidates.is_empty() {
            if need <= self.pivots.len() {
                return leaf(&self.held, &self.pivots, need);
            }
            return true;
        }
        if self.pivots.len() + color_bound(self.graph, &candidates) < need {
            return true;
        }
        // pivot with most neighbors among the candidates, lowest index on ties
        let mut pivot = usize::MAX;
        let mut best = 0;
        for u in candidates.iter() {
            let d = candidates.and(&self.graph.adjacency[u]).len();
            if pivot == usize::MAX || d > best {
                pivot = u;
                best = d;
            }
        }
        let branch = candidates.and_not(&self.graph.adjacency[pivot]);
        let mut rest = candidates;
        for v in branch.iter() {
            let next = rest.and(&self.graph.adjacency[v]);
            let as_pivot = v == pivot;
            if as_pivot {
                self.pivots.push(v);
            } else {
                self.held.push(v);
            }
            let go_on = self.walk(next, leaf);
            if as_pivot {
                self.pivots.pop();
            } else {
                self.held.pop();
            }
            if !go_on {
                return false;
            }
            rest.remove(v);
        }
        true
    }
}

fn pivot_walk(
    graph: &BlockGraph,
    size: usize,
    budget: u64,
    leaf: &mut dyn FnMut(&[usize], &[usize], usize) -> bool,
) -> (u64, bool) {
    let mut walk = PivotWalk {
        graph,
        size,
        nodes: 0,
        budget,
        aborted: false,
        held: Vec::new(),
        pivots: Vec::new(),
    };
    walk.walk(Bits::full(graph.vertex_count()), leaf);
    (walk.nodes.min(budget), walk.aborted)
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    geometry::binomial(n, k).to_u64().unwrap_or(u64::MAX)
}

/// Counts cliques with exactly `size` vertices.
pub fn count_cliques(graph: &BlockGraph, size: usize, budget: u64) -> CliqueCount {
    let mut count = 0u64;
    if size == graph.target {
        let (nodes, aborted) = class_walk(graph, budget, &mut |_| {
            count += 1;
            true
        });
        return CliqueCount {
            count,
            nodes,
            completed: !aborted,
        };
    }
    let (nodes, aborted) = pivot_walk(graph, size, budget, &mut |_, pivots, need| {
        count = count.saturating_add(binomial_u64(pivots.len(), need));
        true
    });
    CliqueCount {
        count,
        nodes,
        completed: !aborted,
    }
}

/// Up to `limit` cliques with exactly `size` vertices, each ascending,
/// sorted, and whether the list is complete.
pub fn enumerate_cliques(graph: &BlockGraph, size: usize, limit: usize, budget: u64) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    if size == graph.target {
        let (_, aborted) = class_walk(graph, budget, &mut |c| {
            if out.len() == limit {
                truncated = true;
                return false;
            }
            let mut c = c.to_vec();
            c.sort_unstable();
            out.push(c);
            true
        });
        out.sort();
        return (out, !aborted && !truncated);
    }
    let (_, aborted) = pivot_walk(graph, size, budget, &mut |held, pivots, need| {
        for extra in pivots.iter().copied().combinations(need) {
            if out.len() == limit {
                truncated = true;
                return false;
            }
            let mut c = held.to_vec();
            c.extend(extra);
            c.sort_unstable();
            out.push(c);
        }
        true
    });
    out.sort();
    (out, !aborted && !truncated)
}

/// Maximal cliques found by [`enumerate_maximal_cliques`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalCliques {
    /// Cliques in discovery order, vertices ascending; at most `limit`.
    pub cliques: Vec<Vec<usize>>,
    /// Number found, including those beyond `limit`.
    pub count: u64,
    pub completed: bool,
}

/// Lists every maximal clique with pivoting Bron–Kerbosch. Pivots and
/// branch order depend only on vertex indices, so output is reproducible.
pub fn enumerate_maximal_cliques(graph: &BlockGraph, limit: usize, budget: u64) -> MaximalCliques {
    struct State<'a> {
        graph: &'a BlockGraph,
        out: MaximalCliques,
        limit: usize,
        nodes: u64,
        budget: u64,
        current: Vec<usize>,
    }

    fn expand(s: &mut State<'_>, p: Bits, x: Bits) {
        s.nodes += 1;
        if s.nodes > s.budget {
            s.out.completed = false;
            return;
        }
        if p.is_empty() {
            if x.is_empty() {
                s.out.count += 1;
                if s.out.cliques.len() < s.limit {
                    let mut c = s.current.clone();
                    c.sort_unstable();
                    s.out.cliques.push(c);
                }
            }
            return;
        }
        // pivot with most neighbors in p, lowest index on ties
        let mut pivot = usize::MAX;
        let mut best = 0;
        for u in p.iter().chain(x.iter()) {
            let d = p.and(&s.graph.adjacency[u]).len();
            if pivot == usize::MAX || d > best || (d == best && u < pivot) {
                pivot = u;
                best = d;
            }
        }
        let branch = p.and_not(&s.graph.adjacency[pivot]);
        let (mut p, mut x) = (p, x);
        for v in branch.iter() {
            if !s.out.completed {
                return;
            }
            let nv = &s.graph.adjacency[v];
            s.current.push(v);
            expand(s, p.and(nv), x.and(nv));
            s.current.pop();
            p.remove(v);
            x.insert(v);
        }
    }

    let n = graph.vertex_count();
    let mut state = State {
        graph,
        out: MaximalCliques {
            cliques: Vec::new(),
            count: 0,
            completed: true,
        },
        limit,
        nodes: 0,
        budget,
        current: Vec::new(),
    };
    expand(&mut state, Bits::full(n), Bits::new(n));
    state.out
}

/// The tiling formed by the blocks of a clique.
pub fn clique_to_tiling(graph: &BlockGraph, clique: &[usize]) -> Result<Tiling> {
    graph.check_clique(clique)?;
    Ok(Tiling::new(
        graph.layer.clone(),
        ShapeFamily::Plain(graph.layer.height()),
        clique.iter().map(|&v| graph.vertices[v].clone()).collect(),
        "clique",
    ))
}

/// The vertices of a tiling's blocks, ascending.
pub fn tiling_to_clique(graph: &BlockGraph, tiling: &Tiling) -> Result<Vec<usize>> {
    if tiling.layer().span() != graph.layer.span() {
        return Err(GraphError::LayerMismatch {
            tiling: tiling.layer().span(),
            graph: graph.layer.span(),
        });
    }
    let mut clique = tiling
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| graph.vertex_of(b).ok_or(GraphError::UnknownBlock(i)))
        .collect::<Result<Vec<_>>>()?;
    clique.sort_unstable();
    graph.check_clique(&clique)?;
    Ok(clique)
}
