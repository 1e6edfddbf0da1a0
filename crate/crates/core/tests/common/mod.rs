//! Shared graph builders for integration tests.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specx_core::Graph;

/// Cartesian product of an m-cycle with an edge: the m-gonal prism.
pub fn prism(m: usize) -> Graph {
    let mut g = Graph::new(2 * m);
    for i in 0..m {
        let j = (i + 1) % m;
        g.add_edge(i, j);
        g.add_edge(m + i, m + j);
        g.add_edge(i, m + i);
    }
    g
}

/// Connected simple k-regular graph on n vertices from the uniform pairing
/// model, resampled until the pairing is simple and connected.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Graph {
    assert!((n * k).is_multiple_of(2), "nk must be even");
    assert!(k < n, "degree must be below the vertex count");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n * k).collect();
    loop {
        points.shuffle(&mut rng);
        let mut g = Graph::new(n);
        let mut simple = true;
        for pair in points.chunks(2) {
            let (u, v) = (pair[0] / k, pair[1] / k);
            if u == v || g.has_edge(u, v) {
                simple = false;
                break;
            }
            g.add_edge(u, v);
        }
        if simple && g.is_connected() {
            return g;
        }
    }
}
