//! Eigenvalues of adjacency matrices and their clustering into a spectrum.
//!
//! The eigensolver is a cyclic Jacobi iteration on the dense symmetric
//! matrix. Adjacency matrices here are small (fixtures stay well below a
//! thousand vertices) and Jacobi converges to all eigenvalues with
//! off-diagonal mass driven to rounding level, which is what the downstream
//! polynomial machinery needs: every distinct eigenvalue and its exact
//! multiplicity.
//!
//! Clustering sorts the raw eigenvalues, merges runs whose consecutive gaps
//! stay below a relative tolerance, and optionally snaps cluster means to
//! nearby integers. Clusters separated by less than ten times the tolerance
//! are flagged as ambiguous rather than rejected.

use crate::graph::Graph;
use crate::matrix::Matrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("Jacobi did not converge within {sweeps} sweeps; off-diagonal residual {residual:e}")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("invalid spectrum: {0}")]
    Invalid(String),
}

/// Iteration budget and convergence target for the Jacobi eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiConfig {
    /// Maximum number of full sweeps over the strict upper triangle.
    pub max_sweeps: usize,
    /// Convergence once the off-diagonal L1 norm drops below
    /// `tol * max(1, frobenius_norm)`.
    pub tol: f64,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        JacobiConfig {
            max_sweeps: 50,
            tol: 1e-12,
        }
    }
}

/// All adjacency eigenvalues of `g`, sorted in descending order.
pub fn eigen_symmetric(g: &Graph, cfg: &JacobiConfig) -> Result<Vec<f64>, SpectraError> {
    jacobi_eigenvalues(Matrix::from_graph(g), cfg)
}

/// Cyclic Jacobi with the classic rotation formulas; eigenvalues only.
fn jacobi_eigenvalues(mut a: Matrix, cfg: &JacobiConfig) -> Result<Vec<f64>, SpectraError> {
    let n = a.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    if n == 1 {
        return Ok(d);
    }
    let mut b = d.clone();
    let mut z = vec![0.0; n];
    let mut fro = 0.0;
    for i in 0..n {
        for j in 0..n {
            fro += a.get(i, j) * a.get(i, j);
        }
    }
    let eps = cfg.tol * f64::max(1.0, fro.sqrt());
    let mut off = off_diagonal_l1(&a);
    for sweep in 0..cfg.max_sweeps {
        if off <= eps {
            d.sort_by(|x, y| y.partial_cmp(x).unwrap());
            return Ok(d);
        }
        // A small threshold during the first sweeps skips negligible
        // rotations, as in the standard formulation.
        let tresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let g100 = 100.0 * apq.abs();
                if sweep > 3 && d[p].abs() + g100 == d[p].abs() && d[q].abs() + g100 == d[q].abs() {
                    a.set(p, q, 0.0);
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g100 == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a.set(p, q, 0.0);
                let rotate = |a: &mut Matrix, i: usize, j: usize, k: usize, l: usize| {
                    let g = a.get(i, j);
                    let h = a.get(k, l);
                    a.set(i, j, g - s * (h + g * tau));
                    a.set(k, l, h + s * (g - h * tau));
                };
                for j in 0..p {
                    rotate(&mut a, j, p, j, q);
                }
                for j in p + 1..q {
                    rotate(&mut a, p, j, j, q);
                }
                for j in q + 1..n {
                    rotate(&mut a, p, j, q, j);
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
        off = off_diagonal_l1(&a);
    }
    if off <= eps {
        d.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return Ok(d);
    }
    Err(SpectraError::NonConvergence {
        sweeps: cfg.max_sweeps,
        residual: off,
    })
}

fn off_diagonal_l1(a: &Matrix) -> f64 {
    let n = a.n();
    let mut off = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            off += a.get(p, q).abs();
        }
    }
    off
}

/// Distinct eigenvalues in descending order with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    distinct: Vec<f64>,
    multiplicity: Vec<usize>,
    n: usize,
}

impl Spectrum {
    pub fn new(distinct: Vec<f64>, multiplicity: Vec<usize>) -> Result<Self, SpectraError> {
        if distinct.is_empty() || distinct.len() != multiplicity.len() {
            return Err(SpectraError::Invalid(
                "need matching nonempty value and multiplicity lists".into(),
            ));
        }
        let strictly_greater =
            |w: &[f64]| w[0].partial_cmp(&w[1]) == Some(std::cmp::Ordering::Greater);
        if distinct.windows(2).any(|w| !strictly_greater(w)) {
            return Err(SpectraError::Invalid(
                "distinct eigenvalues must be strictly decreasing".into(),
            ));
        }
        if multiplicity.contains(&0) {
            return Err(SpectraError::Invalid(
                "multiplicities must be positive".into(),
            ));
        }
        let n = multiplicity.iter().sum();
        Ok(Spectrum {
            distinct,
            multiplicity,
            n,
        })
    }

    /// Number of vertices (sum of multiplicities).
    pub fn n(&self) -> usize {
        self.n
    }

    /// `d`: one less than the number of distinct eigenvalues.
    pub fn d(&self) -> usize {
        self.distinct.len() - 1
    }

    /// `θ_i`, with `θ_0` the largest.
    pub fn theta(&self, i: usize) -> f64 {
        self.distinct[i]
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.multiplicity[i]
    }

    pub fn distinct(&self) -> &[f64] {
        &self.distinct
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicity
    }

    /// Spectrally counted average number of closed walks of length `ell`:
    /// `(1/n) Σ_i m_i θ_i^ell`.
    pub fn moment(&self, ell: u32) -> f64 {
        let s: f64 = self
            .distinct
            .iter()
            .zip(&self.multiplicity)
            .map(|(&th, &m)| m as f64 * th.powi(ell as i32))
            .sum();
        s / self.n as f64
    }

    /// Checks the shape a connected `k`-regular graph forces: simple largest
    /// eigenvalue equal to `k`.
    pub fn validate_regular(&self, k: f64, tol: f64) -> Result<(), SpectraError> {
        if self.multiplicity[0] != 1 {
            return Err(SpectraError::Invalid(format!(
                "largest eigenvalue has multiplicity {}, expected 1 for a connected graph",
                self.multiplicity[0]
            )));
        }
        if (self.distinct[0] - k).abs() > tol * f64::max(1.0, k) {
            return Err(SpectraError::Invalid(format!(
                "largest eigenvalue {} does not match the degree {}",
                self.distinct[0], k
            )));
        }
        Ok(())
    }
}

/// Average number of closed walks of length `ell` per vertex, computed from
/// the spectrum.
pub fn average_circuits(s: &Spectrum, ell: u32) -> f64 {
    s.moment(ell)
}

/// Two adjacent clusters closer than ten times the merge tolerance; kept as
/// a warning, not an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAmbiguity {
    pub upper: f64,
    pub lower: f64,
    pub gap: f64,
    pub merge_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterOutcome {
    pub spectrum: Spectrum,
    /// Per distinct eigenvalue: whether the cluster mean was snapped to an
    /// integer.
    pub snapped: Vec<bool>,
    pub ambiguities: Vec<ClusterAmbiguity>,
}

/// Groups raw eigenvalues into a spectrum.
///
/// Values whose consecutive gap is at most `tol * max(1, |θ|)` land in the
/// same cluster; each cluster reports its mean, snapped to the nearest
/// integer when `snap` is set and the mean is within the same relative
/// tolerance of it.
pub fn cluster_spectrum(raw: &[f64], tol: f64, snap: bool) -> Result<ClusterOutcome, SpectraError> {
    if raw.is_empty() {
        return Err(SpectraError::Invalid(
            "cannot cluster an empty eigenvalue list".into(),
        ));
    }
    if tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(SpectraError::Invalid(
            "cluster tolerance must be positive".into(),
        ));
    }
    let mut sorted = raw.to_vec();
    sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut clusters: Vec<(f64, usize)> = Vec::new(); // (sum, count)
    let mut last = f64::INFINITY;
    for &v in &sorted {
        let threshold = tol * f64::max(1.0, v.abs());
        if !clusters.is_empty() && (last - v).abs() <= threshold {
            let c = clusters.last_mut().unwrap();
            c.0 += v;
            c.1 += 1;
        } else {
            clusters.push((v, 1));
        }
        last = v;
    }
    let mut distinct = Vec::with_capacity(clusters.len());
    let mut multiplicity = Vec::with_capacity(clusters.len());
    let mut snapped = Vec::with_capacity(clusters.len());
    for &(sum, count) in &clusters {
        let mean = sum / count as f64;
        let rounded = mean.round();
        if snap && (mean - rounded).abs() <= tol * f64::max(1.0, mean.abs()) {
            distinct.push(rounded);
            snapped.push(mean != rounded);
        } else {
            distinct.push(mean);
            snapped.push(false);
        }
        multiplicity.push(count);
    }
    let mut ambiguities = Vec::new();
    for w in distinct.windows(2) {
        let scale = f64::max(1.0, f64::max(w[0].abs(), w[1].abs()));
        let gap = w[0] - w[1];
        if gap <= 10.0 * tol * scale {
            ambiguities.push(ClusterAmbiguity {
                upper: w[0],
                lower: w[1],
                gap,
                merge_threshold: tol * scale,
            });
        }
    }
    let spectrum = Spectrum::new(distinct, multiplicity)?;
    Ok(ClusterOutcome {
        spectrum,
        snapped,
        ambiguities,
    })
}
