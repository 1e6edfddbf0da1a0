//! Minimal dense square matrix used by the eigensolver and by polynomial
//! evaluation on adjacency matrices. The fixtures stay in the hundreds of
//! vertices, so naive O(n³) multiplication is plenty.

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut m = Matrix::zeros(n);
        for u in 0..n {
            for v in g.neighbors(u) {
                m.data[u * n + v] = 1.0;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_scaled_identity(&mut self, c: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += c;
        }
    }

    /// `self * rhs`, row-major ikj loop.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &r) in dst.iter_mut().zip(row) {
                    *d += aik * r;
                }
            }
        }
        out
    }

    /// Largest absolute entry-wise difference against `rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!(self.n, rhs.n);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute deviation from the all-ones matrix.
    pub fn max_dev_from_ones(&self) -> f64 {
        self.data
            .iter()
            .map(|a| (a - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_against_identity_and_square() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let a = Matrix::from_graph(&g);
        let i = Matrix::identity(3);
        assert_eq!(a.mul(&i), a);
        let sq = a.mul(&a);
        // Path 0-1-2: A² diagonal is the degree sequence.
        assert_eq!(sq.get(0, 0), 1.0);
        assert_eq!(sq.get(1, 1), 2.0);
        assert_eq!(sq.get(0, 2), 1.0);
        assert_eq!(sq.get(0, 1), 0.0);
    }

    #[test]
    fn diff_helpers() {
        let mut a = Matrix::zeros(2);
        a.add_scaled_identity(1.0);
        let b = Matrix::identity(2);
        assert_eq!(a.max_abs_diff(&b), 0.0);
        assert_eq!(b.max_dev_from_ones(), 1.0);
    }
}
