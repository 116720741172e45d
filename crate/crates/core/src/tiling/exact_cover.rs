//! Exact-cover search for every tiling of a layer.
//!
//! Items are the maximal paths of the layer and options are the distinct
//! blocks of a shape family; a tiling is a set of options covering every
//! item exactly once. The search uses dancing links, branches on the item
//! with the fewest remaining options (lowest path rank on ties) and tries
//! options in block order, so results are reproducible.

use num_traits::Zero;
use serde::Serialize;

use super::{Result, Tiling};
use crate::geometry::{enumerate_blocks, Block, Layer, ShapeFamily};
use crate::Nat;

/// Bounds for [`enumerate_all_tilings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Largest layer volume searched.
    pub max_volume: u64,
    /// Largest block family searched.
    pub max_blocks: u64,
    /// Tilings kept in the census; counting continues past this.
    pub max_stored: usize,
    /// Search nodes visited before giving up.
    pub max_nodes: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_volume: 5000,
            max_blocks: 200_000,
            max_stored: 1000,
            max_nodes: 200_000_000,
        }
    }
}

/// What the search covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustionCertificate {
    /// Search nodes visited.
    pub nodes: u64,
    /// Distinct blocks offered as options.
    pub block_family_size: usize,
    /// Maximal paths to cover.
    pub path_count: usize,
    /// True when the whole search tree was explored.
    pub completed: bool,
}

#[derive(Debug, Clone)]
pub struct TilingCensus {
    /// The first tilings found, in search order.
    pub tilings: Vec<Tiling>,
    /// Tilings found; the exact total when the certificate is complete.
    pub total: Nat,
    pub certificate: ExhaustionCertificate,
}

impl TilingCensus {
    pub fn completed(&self) -> bool {
        self.certificate.completed
    }

    /// True when the search finished without finding a tiling.
    pub fn proves_none(&self) -> bool {
        self.completed() && self.total.is_zero()
    }
}

/// Dancing-links matrix. Node 0 is the root, nodes `1..=items` are item
/// headers, option nodes follow.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    item: Vec<usize>,
    option: Vec<usize>,
    size: Vec<usize>,
}

impl Links {
    fn new(items: usize) -> Self {
        let n = items + 1;
        let mut links = Links {
            left: (0..n).map(|i| if i == 0 { items } else { i - 1 }).collect(),
            right: (0..n).map(|i| if i == items { 0 } else { i + 1 }).collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            item: (0..n).collect(),
            option: vec![usize::MAX; n],
            size: vec![0; n],
        };
        if items == 0 {
            links.left[0] = 0;
            links.right[0] = 0;
        }
        links
    }

    /// Adds an option covering the given 0-based items.
    fn add_option(&mut self, id: usize, items: &[usize]) {
        let first = self.left.len();
        for (j, &it) in items.iter().enumerate() {
            let node = first + j;
            let header = it + 1;
            self.left.push(if j == 0 { first + items.len() - 1 } else { node - 1 });
            self.right.push(if j + 1 == items.len() { first } else { node + 1 });
            self.up.push(self.up[header]);
            self.down.push(header);
            let last = self.up[header];
            self.down[last] = node;
            self.up[header] = node;
            self.item.push(header);
            self.option.push(id);
            self.size[header] += 1;
        }
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.item[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.item[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn choose_item(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[0];
        while c != 0 {
            if self.size[c] < best_size {
                best = Some(c);
                best_size = self.size[c];
            }
            c = self.right[c];
        }
        best
    }
}

struct Search {
    links: Links,
    chosen: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    total: u64,
    found: Vec<Vec<usize>>,
    max_stored: usize,
    aborted: bool,
}

impl Search {
    fn run(&mut self) {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
            return;
        }
        let Some(c) = self.links.choose_item() else {
            self.total += 1;
            if self.found.len() < self.max_stored {
                self.found.push(self.chosen.clone());
            }
            return;
        };
        if self.links.size[c] == 0 {
            return;
        }
        self.links.cover(c);
        let mut r = self.links.down[c];
        while r != c && !self.aborted {
            self.chosen.push(self.links.option[r]);
            let mut j = self.links.right[r];
            while j != r {
                self.links.cover(self.links.item[j]);
                j = self.links.right[j];
            }
            self.run();
            let mut j = self.links.left[r];
            while j != r {
                self.links.uncover(self.links.item[j]);
                j = self.links.left[j];
            }
            self.chosen.pop();
            r = self.links.down[r];
        }
        self.links.uncover(c);
    }
}

/// Finds every tiling of `layer` by blocks of `family`.
///
/// Fails when the layer volume or the block family exceeds the limits.
/// When the node budget runs out the census is returned with an incomplete
/// certificate and `total` counts only the tilings found so far.
///
/// ```
/// use cobweb::{tiling, FSequence, Layer, ShapeFamily};
///
/// let layer = Layer::new(&FSequence::natural(), 2, 3).unwrap();
/// let census = tiling::enumerate_all_tilings(&layer, &ShapeFamily::Plain(2), Default::default()).unwrap();
/// assert!(census.completed());
/// assert_eq!(census.total, 4u32.into());
/// ```
pub fn enumerate_all_tilings(layer: &Layer, family: &ShapeFamily, limits: EnumerationLimits) -> Result<TilingCensus> {
    let volume = layer.volume_within(limits.max_volume)?;
    let blocks: Vec<Block> = enumerate_blocks(layer, family, limits.max_blocks)?.blocks;
    let mut links = Links::new(volume);
    for (id, block) in blocks.iter().enumerate() {
        let items: Vec<usize> = block.max_paths().map(|p| layer.path_rank(&p)).collect();
        links.add_option(id, &items);
    }
    let mut search = Search {
        links,
        chosen: Vec::new(),
        nodes: 0,
        max_nodes: limits.max_nodes,
        total: 0,
        found: Vec::new(),
        max_stored: limits.max_stored,
        aborted: false,
    };
    search.run();
    let tilings = search
        .found
        .iter()
        .map(|ids| {
            Tiling::new(
                layer.clone(),
                family.clone(),
                ids.iter().map(|&i| blocks[i].clone()).collect(),
                "exhaustive",
            )
        })
        .collect();
    Ok(TilingCensus {
        tilings,
        total: Nat::from(search.total),
        certificate: ExhaustionCertificate {
            nodes: search.nodes.min(limits.max_nodes),
            block_family_size: blocks.len(),
            path_count: volume,
            completed: !search.aborted,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsequence::FSequence;
    use crate::tiling::{count_construction_tilings, verify_tiling};

    fn census(seq: &FSequence, k: usize, n: usize) -> TilingCensus {
        let layer = Layer::new(seq, k, n).unwrap();
        enumerate_all_tilings(&layer, &ShapeFamily::Plain(n - k + 1), EnumerationLimits::default()).unwrap()
    }

    #[test]
    fn single_level_has_one_tiling() {
        let c = census(&FSequence::natural(), 4, 4);
        assert!(c.completed());
        assert_eq!(c.total, Nat::from(1u32));
    }

    #[test]
    fn natural_two_three() {
        let c = census(&FSequence::natural(), 2, 3);
        assert!(c.completed());
        // three constructible tilings plus the one with all blocks upright
        assert_eq!(c.total, Nat::from(4u32));
        assert!(c.total >= count_construction_tilings(&FSequence::natural(), 2, 3).unwrap());
        for t in &c.tilings {
            assert!(verify_tiling(t.layer(), t, 1000).valid);
        }
    }

    #[test]
    fn fibonacci_layer_with_single_paths() {
        let c = census(&FSequence::fibonacci(), 3, 4);
        assert_eq!(c.total, Nat::from(1u32));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let layer = Layer::new(&FSequence::natural(), 3, 5).unwrap();
        let limits = EnumerationLimits {
            max_nodes: 10,
            ..EnumerationLimits::default()
        };
        let c = enumerate_all_tilings(&layer, &ShapeFamily::Plain(3), limits).unwrap();
        assert!(!c.completed());
        assert!(!c.proves_none());
    }

    #[test]
    fn caps_are_errors() {
        let layer = Layer::new(&FSequence::natural(), 3, 5).unwrap();
        let limits = EnumerationLimits {
            max_volume: 10,
            ..EnumerationLimits::default()
        };
        assert!(enumerate_all_tilings(&layer, &ShapeFamily::Plain(3), limits).is_err());
    }

    #[test]
    fn stored_tilings_are_bounded() {
        let layer = Layer::new(&FSequence::natural(), 3, 4).unwrap();
        let limits = EnumerationLimits {
            max_stored: 2,
            ..EnumerationLimits::default()
        };
        let c = enumerate_all_tilings(&layer, &ShapeFamily::Plain(2), limits).unwrap();
        assert_eq!(c.tilings.len(), 2);
        assert!(c.total > Nat::from(2u32));
    }
}
