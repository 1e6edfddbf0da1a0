//! Undirected simple graphs and their distance structure.
//!
//! Adjacency is stored as packed 64-bit rows, which keeps neighbourhood
//! intersections (the inner loop of the regularity oracles) at one `AND` +
//! popcount per word. Distances come from one BFS per source vertex and are
//! kept as a dense matrix of small integers. Average counts over the
//! distance partition are exact rationals: they are ratios of vertex counts
//! and later get compared against spectrally computed real numbers.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Undirected simple graph on vertices `0..n` with packed bitrow adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Creates an edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    /// Builds a graph from an edge list. Panics on self-loops or vertices
    /// out of range; callers validate their input first.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Inserts the undirected edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loops are not representable");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1u64 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Iterates over the neighbours of `u` in increasing order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * 64;
            BitIter { word: w }.map(move |b| base + b)
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        bfs_from(self, 0).iter().all(|&d| d != UNREACHED)
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let b = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(b)
    }
}

/// Pair of vertices whose degrees differ, produced when a graph fails the
/// regularity precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("graph is not regular: deg({u}) = {degree_u} but deg({v}) = {degree_v}")]
pub struct IrregularWitness {
    pub u: usize,
    pub v: usize,
    pub degree_u: usize,
    pub degree_v: usize,
}

/// Returns the common degree, or a witness pair of vertices with different
/// degrees.
pub fn regular_degree(g: &Graph) -> Result<usize, IrregularWitness> {
    let k = g.degree(0);
    for v in 1..g.n() {
        let dv = g.degree(v);
        if dv != k {
            return Err(IrregularWitness {
                u: 0,
                v,
                degree_u: k,
                degree_v: dv,
            });
        }
    }
    Ok(k)
}

/// Pair of mutually unreachable vertices in a disconnected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("graph is disconnected: no path between vertices {u} and {v}")]
pub struct DisconnectedWitness {
    pub u: usize,
    pub v: usize,
}

const UNREACHED: u32 = u32::MAX;

fn bfs_from(g: &Graph, src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.n()];
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for v in g.neighbors(u) {
            if dist[v] == UNREACHED {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs distances plus the per-vertex sizes of the distance classes
/// `Γ_i(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDecomposition {
    n: usize,
    diameter: usize,
    dist: Vec<u32>,
    /// `counts[i][u] = |Γ_i(u)|` for `0 <= i <= diameter`.
    counts: Vec<Vec<u32>>,
}

impl DistanceDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.n + v] as usize
    }

    /// `|Γ_i(u)|`; zero for `i` beyond the diameter.
    pub fn count(&self, i: usize, u: usize) -> usize {
        self.counts.get(i).map_or(0, |row| row[u] as usize)
    }

    /// `|Γ_0(u) ∪ … ∪ Γ_i(u)|`, clamped at `n` beyond the diameter.
    pub fn partial_count(&self, i: usize, u: usize) -> usize {
        (0..=i.min(self.diameter)).map(|j| self.count(j, u)).sum()
    }
}

/// Runs one BFS per vertex. Errors on a disconnected input with a witness
/// pair of unreachable vertices.
pub fn distance_decomposition(g: &Graph) -> Result<DistanceDecomposition, DisconnectedWitness> {
    let n = g.n();
    assert!(n > 0, "distance decomposition of the empty graph");
    let mut dist = vec![0u32; n * n];
    let mut diameter = 0usize;
    for u in 0..n {
        let row = bfs_from(g, u);
        if let Some(v) = row.iter().position(|&d| d == UNREACHED) {
            return Err(DisconnectedWitness { u, v });
        }
        for (v, &d) in row.iter().enumerate() {
            dist[u * n + v] = d;
            diameter = diameter.max(d as usize);
        }
    }
    let mut counts = vec![vec![0u32; n]; diameter + 1];
    for u in 0..n {
        for v in 0..n {
            counts[dist[u * n + v] as usize][u] += 1;
        }
    }
    Ok(DistanceDecomposition {
        n,
        diameter,
        dist,
        counts,
    })
}

/// Average sizes of the distance classes, kept as exact rationals.
///
/// `kbar(i)` is the average of `|Γ_i(u)|` over all vertices and `nbar(i)`
/// the average of `|Γ_0(u) ∪ … ∪ Γ_i(u)|`. Both extend past the diameter
/// (with 0 and `n` respectively) so that callers can ask for, say, the
/// average count at distance 3 of a diameter-2 graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageCounts {
    n: usize,
    diameter: usize,
    kbar: Vec<Rational64>,
}

impl AverageCounts {
    /// Builds average counts from already-constant class sizes, e.g. the
    /// `k_i` of an intersection array with no graph at hand. The sizes must
    /// start with `k_0 = 1` and sum to the vertex count.
    pub fn from_class_sizes(sizes: &[i64]) -> Self {
        assert!(
            sizes.first() == Some(&1),
            "class sizes must start with k_0 = 1"
        );
        assert!(sizes.iter().all(|&s| s > 0), "class sizes must be positive");
        let n: i64 = sizes.iter().sum();
        AverageCounts {
            n: n as usize,
            diameter: sizes.len() - 1,
            kbar: sizes.iter().map(|&s| Rational64::from_integer(s)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn kbar(&self, i: usize) -> Rational64 {
        self.kbar
            .get(i)
            .copied()
            .unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn nbar(&self, i: usize) -> Rational64 {
        (0..=i.min(self.diameter)).map(|j| self.kbar(j)).sum()
    }

    pub fn kbar_f64(&self, i: usize) -> f64 {
        rational_to_f64(self.kbar(i))
    }

    pub fn nbar_f64(&self, i: usize) -> f64 {
        rational_to_f64(self.nbar(i))
    }
}

pub(crate) fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact average distance-class sizes from a decomposition.
pub fn average_counts(dd: &DistanceDecomposition) -> AverageCounts {
    let n = dd.n() as i64;
    let kbar = (0..=dd.diameter())
        .map(|i| {
            let total: i64 = (0..dd.n()).map(|u| dd.count(i, u) as i64).sum();
            Rational64::new(total, n)
        })
        .collect();
    AverageCounts {
        n: dd.n(),
        diameter: dd.diameter(),
        kbar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn edges_are_symmetric_and_counted_once() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn bit_rows_work_past_one_word() {
        let n = 130;
        let mut g = Graph::new(n);
        g.add_edge(0, 129);
        g.add_edge(64, 65);
        assert!(g.has_edge(129, 0));
        assert!(g.has_edge(65, 64));
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.common_neighbors(0, 65), 0);
        g.add_edge(0, 64);
        g.add_edge(129, 64);
        assert_eq!(g.common_neighbors(0, 129), 1);
    }

    #[test]
    fn regular_degree_reports_witness() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let err = regular_degree(&star).unwrap_err();
        assert_eq!(err.degree_u, 3);
        assert_eq!(err.degree_v, 1);
        assert_eq!(regular_degree(&complete(5)).unwrap(), 4);
    }

    #[test]
    fn distances_on_a_path() {
        let g = path(5);
        let dd = distance_decomposition(&g).unwrap();
        assert_eq!(dd.diameter(), 4);
        assert_eq!(dd.dist(0, 4), 4);
        assert_eq!(dd.dist(3, 1), 2);
        assert_eq!(dd.count(0, 2), 1);
        assert_eq!(dd.count(1, 2), 2);
        assert_eq!(dd.count(2, 2), 2);
        assert_eq!(dd.partial_count(10, 0), 5);
    }

    #[test]
    fn disconnected_graph_yields_witness_pair() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert!(!g.is_connected());
        let err = distance_decomposition(&g).unwrap_err();
        assert_eq!((err.u, err.v), (0, 2));
    }

    #[test]
    fn average_counts_are_exact_rationals() {
        // Path on 3 vertices: k_1 sizes are (1, 2, 1), so kbar_1 = 4/3.
        let dd = distance_decomposition(&path(3)).unwrap();
        let ac = average_counts(&dd);
        assert_eq!(ac.kbar(1), Rational64::new(4, 3));
        assert_eq!(ac.nbar(1), Rational64::new(7, 3));
        assert_eq!(ac.nbar(2), Rational64::from_integer(3));
        assert_eq!(ac.kbar(7), Rational64::from_integer(0));
        assert_eq!(ac.nbar(7), Rational64::from_integer(3));
    }

    #[test]
    fn triangle_inequality_on_a_fixed_graph() {
        let g = Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 0),
                (1, 4),
            ],
        );
        let dd = distance_decomposition(&g).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                for w in 0..7 {
                    assert!(dd.dist(u, w) <= dd.dist(u, v) + dd.dist(v, w));
                }
            }
        }
    }
}
