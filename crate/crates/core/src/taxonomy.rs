//! Threshold tree over species and the taxonomic distinctness indices.
//!
//! The species of a histogram are arranged into a binary tree by recursive
//! thresholding: each node splits its species set at the abundance-weighted
//! mean gray level (levels below the mean go left, levels at or above it go
//! right) until every leaf holds one species. Distances between species are
//! edge counts on leaf-to-leaf paths, collected into an S x S matrix that the
//! seven indices consume together with the abundances.
//!
//! Everything here depends only on the histogram, so all outputs inherit its
//! permutation invariance.

use crate::ecosystem::SpeciesHistogram;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { level: u8 },
    Internal { threshold: f64, left: usize, right: usize },
}

/// Binary partition tree over the histogram's species. Leaves appear in
/// ascending level order, matching the histogram's entry order; a tree over
/// S species has exactly S - 1 internal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhyloTree {
    nodes: Vec<Node>,
    root: usize,
    leaf_count: usize,
}

/// Recursively partitions the histogram's species by abundance-weighted mean
/// gray level. The weighted mean of two or more distinct levels lies strictly
/// above the minimum and at or below the maximum, so both sides of every
/// split are non-empty.
pub fn build_tree(hist: &SpeciesHistogram) -> PhyloTree {
    fn split(entries: &[(u8, u64)], nodes: &mut Vec<Node>) -> usize {
        if entries.len() == 1 {
            nodes.push(Node::Leaf { level: entries[0].0 });
            return nodes.len() - 1;
        }
        let mut weighted: u128 = 0;
        let mut count: u128 = 0;
        for &(level, c) in entries {
            weighted += level as u128 * c as u128;
            count += c as u128;
        }
        let threshold = weighted as f64 / count as f64;
        let cut = entries.partition_point(|&(level, _)| (level as f64) < threshold);
        debug_assert!(cut > 0 && cut < entries.len());
        let left = split(&entries[..cut], nodes);
        let right = split(&entries[cut..], nodes);
        nodes.push(Node::Internal { threshold, left, right });
        nodes.len() - 1
    }

    let mut nodes = Vec::with_capacity(2 * hist.richness() - 1);
    let root = split(hist.entries(), &mut nodes);
    PhyloTree {
        nodes,
        root,
        leaf_count: hist.richness(),
    }
}

impl PhyloTree {
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len() - self.leaf_count
    }

    /// Leaf levels in tree order (left to right), which is ascending.
    pub fn leaf_levels(&self) -> Vec<u8> {
        fn walk(nodes: &[Node], at: usize, out: &mut Vec<u8>) {
            match nodes[at] {
                Node::Leaf { level } => out.push(level),
                Node::Internal { left, right, .. } => {
                    walk(nodes, left, out);
                    walk(nodes, right, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count);
        walk(&self.nodes, self.root, &mut out);
        out
    }

    /// Root split threshold, if the tree has one (None for a single leaf).
    pub fn root_threshold(&self) -> Option<f64> {
        match self.nodes[self.root] {
            Node::Leaf { .. } => None,
            Node::Internal { threshold, .. } => Some(threshold),
        }
    }

    /// Renders the tree as indented text, one node per line, for debugging
    /// and worked-example comparison.
    pub fn render_indented(&self) -> String {
        fn walk(nodes: &[Node], at: usize, prefix: &str, last: bool, top: bool, out: &mut String) {
            let (branch, child_prefix) = if top {
                ("".to_string(), "".to_string())
            } else if last {
                (format!("{prefix}`-- "), format!("{prefix}    "))
            } else {
                (format!("{prefix}|-- "), format!("{prefix}|   "))
            };
            match nodes[at] {
                Node::Leaf { level } => {
                    out.push_str(&format!("{branch}leaf {level}\n"));
                }
                Node::Internal { threshold, left, right } => {
                    out.push_str(&format!("{branch}split @ {threshold}\n"));
                    walk(nodes, left, &child_prefix, false, false, out);
                    walk(nodes, right, &child_prefix, true, false, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.nodes, self.root, "", true, true, &mut out);
        out
    }
}

/// Symmetric matrix of leaf-to-leaf path lengths in edges. Row/column i
/// corresponds to the i-th histogram entry (ascending levels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.d[i * self.size + j] = v;
    }

    /// Serializes the matrix as CSV with a level header row and column, for
    /// debugging dumps. `levels` must name each row in matrix order.
    pub fn to_csv(&self, levels: &[u8]) -> String {
        assert_eq!(levels.len(), self.size, "level list must match matrix size");
        let mut out = String::from("level");
        for &l in levels {
            out.push_str(&format!(",{l}"));
        }
        out.push('\n');
        for (i, &l) in levels.iter().enumerate() {
            out.push_str(&format!("{l}"));
            for j in 0..self.size {
                out.push_str(&format!(",{}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Computes all pairwise leaf distances by merging leaf lists bottom-up: a
/// pair's path runs through the lowest common ancestor, one edge per level
/// descended on each side.
pub fn distance_matrix(tree: &PhyloTree) -> DistanceMatrix {
    let size = tree.leaf_count();
    let mut dm = DistanceMatrix {
        size,
        d: vec![0; size * size],
    };

    // Returns (leaf index, edges from this node down to the leaf).
    fn walk(
        nodes: &[Node],
        at: usize,
        next_leaf: &mut usize,
        dm: &mut DistanceMatrix,
    ) -> Vec<(usize, u32)> {
        match nodes[at] {
            Node::Leaf { .. } => {
                let idx = *next_leaf;
                *next_leaf += 1;
                vec![(idx, 0)]
            }
            Node::Internal { left, right, .. } => {
                let l = walk(nodes, left, next_leaf, dm);
                let r = walk(nodes, right, next_leaf, dm);
                for &(i, di) in &l {
                    for &(j, dj) in &r {
                        let dist = di + dj + 2;
                        dm.set(i, j, dist);
                        dm.set(j, i, dist);
                    }
                }
                let mut merged = l;
                merged.extend(r);
                for entry in &mut merged {
                    entry.1 += 1;
                }
                merged
            }
        }
    }

    let mut next_leaf = 0;
    walk(&tree.nodes, tree.root, &mut next_leaf, &mut dm);
    debug_assert_eq!(next_leaf, size);
    dm
}

/// The seven taxonomic index values for one histogram/matrix pair, in
/// canonical order (delta, delta_star, s_pd, d_nn, e_eq, e_iq, d_tt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxonomicIndices {
    pub delta: f64,
    pub delta_star: f64,
    pub s_pd: f64,
    pub d_nn: f64,
    pub e_eq: f64,
    pub e_iq: f64,
    pub d_tt: f64,
}

impl TaxonomicIndices {
    pub const COUNT: usize = 7;

    pub fn compute(hist: &SpeciesHistogram, dm: &DistanceMatrix) -> Self {
        TaxonomicIndices {
            delta: taxonomic_diversity(hist, dm),
            delta_star: taxonomic_distinctness(hist, dm),
            s_pd: sum_phylogenetic_distances(hist, dm),
            d_nn: nn_distance(dm),
            e_eq: extensive_quadratic_entropy(dm),
            e_iq: intensive_quadratic_entropy(dm),
            d_tt: total_taxonomic_distinctness(dm),
        }
    }

    pub fn to_array(self) -> [f64; Self::COUNT] {
        [
            self.delta, self.delta_star, self.s_pd, self.d_nn, self.e_eq, self.e_iq, self.d_tt,
        ]
    }
}

/// Sums d_ij * x_i * x_j over unordered species pairs, exactly in integers.
/// Returns (weighted sum, plain cross-count sum of x_i * x_j).
fn pair_sums(hist: &SpeciesHistogram, dm: &DistanceMatrix) -> (u128, u128) {
    let entries = hist.entries();
    assert_eq!(entries.len(), dm.size(), "histogram and matrix disagree on S");
    let mut weighted: u128 = 0;
    let mut cross: u128 = 0;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let prod = entries[i].1 as u128 * entries[j].1 as u128;
            weighted += dm.get(i, j) as u128 * prod;
            cross += prod;
        }
    }
    (weighted, cross)
}

/// Taxonomic diversity Delta: average tree distance between two individuals
/// drawn without replacement,
/// (sum over i<j of d_ij x_i x_j) / (N(N-1)/2). Zero for a single species.
pub fn taxonomic_diversity(hist: &SpeciesHistogram, dm: &DistanceMatrix) -> f64 {
    if hist.richness() == 1 {
        return 0.0;
    }
    let (weighted, _) = pair_sums(hist, dm);
    let n = hist.total() as u128;
    let denom = n * (n - 1) / 2;
    weighted as f64 / denom as f64
}

/// Taxonomic distinctness Delta*: average tree distance between two
/// individuals of different species,
/// (sum over i<j of d_ij x_i x_j) / (sum over i<j of x_i x_j).
/// Zero (degenerate) for a single species.
pub fn taxonomic_distinctness(hist: &SpeciesHistogram, dm: &DistanceMatrix) -> f64 {
    if hist.richness() == 1 {
        return 0.0;
    }
    let (weighted, cross) = pair_sums(hist, dm);
    weighted as f64 / cross as f64
}

/// Abundance-weighted sum of phylogenetic distances sPD: the pair count
/// S(S-1)/2 times the abundance-weighted mean pairwise distance. With uniform
/// abundances the weights cancel and this is the plain sum of all pairwise
/// distances. Zero for a single species.
pub fn sum_phylogenetic_distances(hist: &SpeciesHistogram, dm: &DistanceMatrix) -> f64 {
    let s = hist.richness();
    if s == 1 {
        return 0.0;
    }
    let (weighted, cross) = pair_sums(hist, dm);
    let pairs = (s as u64 * (s as u64 - 1) / 2) as f64;
    pairs * (weighted as f64 / cross as f64)
}

/// Mean nearest-taxon distance dNN: for each species the distance to its
/// closest other species, averaged over species. Zero for a single species.
pub fn nn_distance(dm: &DistanceMatrix) -> f64 {
    let s = dm.size();
    if s == 1 {
        return 0.0;
    }
    let mut sum: u64 = 0;
    for i in 0..s {
        let mut best = u32::MAX;
        for j in 0..s {
            if j != i {
                best = best.min(dm.get(i, j));
            }
        }
        sum += best as u64;
    }
    sum as f64 / s as f64
}

fn ordered_pair_distance_sum(dm: &DistanceMatrix) -> u64 {
    let s = dm.size();
    let mut sum: u64 = 0;
    for i in 0..s {
        for j in 0..s {
            sum += dm.get(i, j) as u64;
        }
    }
    sum
}

/// Extensive quadratic entropy eEQ: sum of d_ij over ordered pairs (twice the
/// unordered sum).
pub fn extensive_quadratic_entropy(dm: &DistanceMatrix) -> f64 {
    ordered_pair_distance_sum(dm) as f64
}

/// Intensive quadratic entropy eIQ: eEQ normalized by S^2.
pub fn intensive_quadratic_entropy(dm: &DistanceMatrix) -> f64 {
    let s = dm.size() as u64;
    ordered_pair_distance_sum(dm) as f64 / (s * s) as f64
}

/// Total taxonomic distinctness dTT: per-species mean distance to the other
/// species, summed over species; identically eEQ/(S-1). Zero for a single
/// species.
pub fn total_taxonomic_distinctness(dm: &DistanceMatrix) -> f64 {
    let s = dm.size() as u64;
    if s == 1 {
        return 0.0;
    }
    ordered_pair_distance_sum(dm) as f64 / (s - 1) as f64
}
