//! Predistance polynomials, preintersection numbers, and the Hoffman
//! polynomial.
//!
//! For a spectrum with distinct eigenvalues θ_0 > … > θ_d and multiplicities
//! m_i summing to n, the spectral inner product is ⟨p,q⟩ = (1/n) Σ m_i
//! p(θ_i) q(θ_i). The predistance polynomials p_0 … p_d are the orthogonal
//! sequence for this product normalized by ‖p_i‖² = p_i(θ_0). They satisfy a
//! three-term recurrence x p_i = β_{i−1} p_{i−1} + α_i p_i + γ_{i+1} p_{i+1},
//! and the recurrence coefficients (the preintersection numbers) generalize
//! the intersection numbers of a distance-regular graph.
//!
//! Polynomials are stored in the monomial basis; degrees stay small enough
//! that conditioning is not a concern. Inner products during the recurrence
//! are taken on a value table over the eigenvalue mesh, which avoids
//! coefficient cancellation.

use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::spectra::Spectrum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthopolyError {
    #[error("alpha_0 = {alpha0} does not vanish; the eigenvalue sum is nonzero")]
    NonzeroTrace { alpha0: f64 },
    #[error("gamma_1 = {gamma1} deviates from 1; not the spectrum of a regular graph")]
    GammaOneDeviation { gamma1: f64 },
    #[error("p_{index}(theta_0) = {value} is not positive; spectrum is invalid or misclustered")]
    NonPositiveLeadingValue { index: usize, value: f64 },
    #[error("recurrence degenerated at step {index}: residual norm square {norm_sq:e}")]
    DegenerateRecurrence { index: usize, norm_sq: f64 },
    #[error("closed-form gamma_2 denominator {denominator:e} is too close to zero")]
    SmallDenominator { denominator: f64 },
}

/// Real polynomial in the monomial basis, lowest degree first. The zero
/// polynomial has an empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1.0] }
    }

    pub fn x() -> Self {
        Poly {
            coeffs: vec![0.0, 1.0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn leading_coeff(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// x·p.
    pub fn mul_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// self + factor·other.
    pub fn add_scaled(&self, other: &Poly, factor: f64) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(i) + factor * other.coeff(i);
        }
        Poly::new(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

/// ⟨p,q⟩ = (1/n) Σ m_i p(θ_i) q(θ_i).
pub fn inner_product(p: &Poly, q: &Poly, s: &Spectrum) -> f64 {
    let mut sum = 0.0;
    for (i, &th) in s.distinct().iter().enumerate() {
        sum += s.multiplicity(i) as f64 * p.eval(th) * q.eval(th);
    }
    sum / s.n() as f64
}

pub fn norm_sq(p: &Poly, s: &Spectrum) -> f64 {
    inner_product(p, p, s)
}

fn weighted_dot(s: &Spectrum, a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.len() {
        sum += s.multiplicity(i) as f64 * a[i] * b[i];
    }
    sum / s.n() as f64
}

/// The predistance polynomials p_0 … p_d with their recurrence coefficients,
/// partial sums q_i, and the Hoffman polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredistanceSystem {
    spectrum: Spectrum,
    p: Vec<Poly>,
    /// values[i][j] = p_i(θ_j), kept from the recurrence.
    values: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    qsum: Vec<Poly>,
    hoffman: Poly,
}

/// Preintersection numbers padded to a common index range 0..=d, with the
/// conventions γ_0 = 0 and β_d = 0, so that α_i + β_i + γ_i = k at every
/// index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preintersection {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl PredistanceSystem {
    /// Runs the three-term recurrence over the spectrum. `tol` bounds the
    /// accepted deviation of α_0 from 0 and γ_1 from 1, the signature of a
    /// regular graph spectrum.
    pub fn new(spectrum: &Spectrum, tol: f64) -> Result<Self, OrthopolyError> {
        let d = spectrum.d();
        let mesh = spectrum.distinct().to_vec();
        let theta0 = mesh[0];

        let mut p: Vec<Poly> = vec![Poly::one()];
        let mut values: Vec<Vec<f64>> = vec![vec![1.0; d + 1]];
        let mut norms: Vec<f64> = vec![1.0];
        let mut alpha: Vec<f64> = Vec::with_capacity(d + 1);
        let mut beta: Vec<f64> = Vec::with_capacity(d);
        let mut gamma: Vec<f64> = Vec::with_capacity(d);

        for i in 0..=d {
            let xv: Vec<f64> = (0..=d).map(|j| mesh[j] * values[i][j]).collect();
            let a_i = weighted_dot(spectrum, &xv, &values[i]) / norms[i];
            alpha.push(a_i);
            let b_prev = if i > 0 {
                let b = weighted_dot(spectrum, &xv, &values[i - 1]) / norms[i - 1];
                beta.push(b);
                b
            } else {
                0.0
            };
            if i == 0 && a_i.abs() > tol * f64::max(1.0, theta0) {
                return Err(OrthopolyError::NonzeroTrace { alpha0: a_i });
            }
            if i == d {
                break;
            }
            let r_values: Vec<f64> = (0..=d)
                .map(|j| {
                    let prev = if i > 0 { values[i - 1][j] } else { 0.0 };
                    xv[j] - a_i * values[i][j] - b_prev * prev
                })
                .collect();
            let mut r_poly = p[i].mul_x().add_scaled(&p[i], -a_i);
            if i > 0 {
                r_poly = r_poly.add_scaled(&p[i - 1], -b_prev);
            }
            let r_norm_sq = weighted_dot(spectrum, &r_values, &r_values);
            let scale = f64::max(1.0, theta0 * theta0 * norms[i]);
            if r_norm_sq <= 1e-24 * scale {
                return Err(OrthopolyError::DegenerateRecurrence {
                    index: i + 1,
                    norm_sq: r_norm_sq,
                });
            }
            // r(theta_0) = gamma_{i+1} p_{i+1}(theta_0) is positive for every
            // true spectrum but shrinks fast on graphs far from
            // distance-regular, so only values at roundoff scale indicate a
            // misclustered spectrum.
            let r0 = r_values[0];
            if r0 <= 1e-12 * f64::max(1.0, r_norm_sq.sqrt()) {
                return Err(OrthopolyError::NonPositiveLeadingValue {
                    index: i + 1,
                    value: r0,
                });
            }
            let g_next = r_norm_sq / r0;
            if i == 0 && (g_next - 1.0).abs() > tol * f64::max(1.0, theta0) {
                return Err(OrthopolyError::GammaOneDeviation { gamma1: g_next });
            }
            gamma.push(g_next);
            let inv = 1.0 / g_next;
            p.push(r_poly.scale(inv));
            values.push(r_values.iter().map(|&v| v * inv).collect());
            norms.push(r_norm_sq * inv * inv);
        }

        let mut qsum = Vec::with_capacity(d + 1);
        let mut acc = Poly::zero();
        for poly in &p {
            acc = acc.add_scaled(poly, 1.0);
            qsum.push(acc.clone());
        }
        let hoffman = hoffman_polynomial(spectrum);

        Ok(PredistanceSystem {
            spectrum: spectrum.clone(),
            p,
            values,
            alpha,
            beta,
            gamma,
            qsum,
            hoffman,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn d(&self) -> usize {
        self.p.len() - 1
    }

    /// θ_0, the degree of the underlying regular graph.
    pub fn k(&self) -> f64 {
        self.spectrum.theta(0)
    }

    pub fn p(&self, i: usize) -> &Poly {
        &self.p[i]
    }

    /// p_i(θ_j) from the recurrence value table.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// ‖p_i‖², equal to p_i(θ_0) by normalization.
    pub fn norm_sq(&self, i: usize) -> f64 {
        self.values[i][0]
    }

    /// α_i for 0 ≤ i ≤ d.
    pub fn alpha(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    /// β_i for 0 ≤ i ≤ d−1.
    pub fn beta(&self, i: usize) -> f64 {
        self.beta_checked(i).expect("beta index out of range")
    }

    fn beta_checked(&self, i: usize) -> Option<f64> {
        self.beta.get(i).copied()
    }

    /// γ_i for 1 ≤ i ≤ d.
    pub fn gamma(&self, i: usize) -> f64 {
        assert!(i >= 1, "gamma is defined for indices 1..=d");
        self.gamma[i - 1]
    }

    /// q_i = p_0 + … + p_i.
    pub fn qsum(&self, i: usize) -> &Poly {
        &self.qsum[i]
    }

    /// q_i(θ_j) summed from the value table.
    pub fn qsum_value(&self, i: usize, j: usize) -> f64 {
        (0..=i).map(|l| self.values[l][j]).sum()
    }

    /// The Hoffman polynomial, built independently from the roots; equals
    /// q_d up to floating-point error.
    pub fn hoffman(&self) -> &Poly {
        &self.hoffman
    }

    pub fn preintersection(&self) -> Preintersection {
        let d = self.d();
        let mut beta = self.beta.clone();
        beta.push(0.0);
        let mut gamma = vec![0.0];
        gamma.extend_from_slice(&self.gamma);
        Preintersection {
            alpha: self.alpha.clone(),
            beta,
            gamma: {
                debug_assert_eq!(gamma.len(), d + 1);
                gamma
            },
        }
    }
}

/// Builds the predistance system with the default validation tolerance.
pub fn predistance_system(s: &Spectrum, tol: f64) -> Result<PredistanceSystem, OrthopolyError> {
    PredistanceSystem::new(s, tol)
}

/// γ_2 from average closed-walk counts:
/// γ_2 = (C̄_3² − C̄_4·k + k³) / (k(C̄_3 + k − k²)).
pub fn gamma2_closed_form(s: &Spectrum) -> Result<f64, OrthopolyError> {
    let k = s.theta(0);
    let c3 = s.moment(3);
    let c4 = s.moment(4);
    let den = k * (c3 + k - k * k);
    if den.abs() <= 1e-9 * f64::max(1.0, k * k * k) {
        return Err(OrthopolyError::SmallDenominator { denominator: den });
    }
    Ok((c3 * c3 - c4 * k + k * k * k) / den)
}

/// The unique degree-d polynomial with H(θ_i) = 0 for i ≥ 1 and H(θ_0) = n:
/// H = (n / Π_{i≥1}(θ_0−θ_i)) · Π_{i≥1}(x−θ_i).
pub fn hoffman_polynomial(s: &Spectrum) -> Poly {
    let theta0 = s.theta(0);
    let mut h = Poly::one();
    let mut pi0 = 1.0;
    for i in 1..=s.d() {
        let th = s.theta(i);
        h = h.mul(&Poly::new(vec![-th, 1.0]));
        pi0 *= theta0 - th;
    }
    h.scale(s.n() as f64 / pi0)
}

/// p(A) by Horner's rule on the adjacency matrix.
pub fn apply_poly(p: &Poly, g: &Graph) -> Matrix {
    let n = g.n();
    let a = Matrix::from_graph(g);
    if p.is_zero() {
        return Matrix::zeros(n);
    }
    let coeffs = p.coeffs();
    let mut m = Matrix::zeros(n);
    m.add_scaled_identity(coeffs[coeffs.len() - 1]);
    for &c in coeffs.iter().rev().skip(1) {
        m = a.mul(&m);
        m.add_scaled_identity(c);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::generate_spec;
    use crate::graph::distance_decomposition;

    fn spectrum(distinct: &[f64], mult: &[usize]) -> Spectrum {
        Spectrum::new(distinct.to_vec(), mult.to_vec()).unwrap()
    }

    fn odd4() -> Spectrum {
        spectrum(&[4.0, 2.0, -1.0, -3.0], &[1, 14, 14, 6])
    }

    fn hamming43() -> Spectrum {
        spectrum(&[8.0, 5.0, 2.0, -1.0, -4.0], &[1, 8, 24, 32, 16])
    }

    fn odd5() -> Spectrum {
        spectrum(&[5.0, 3.0, 1.0, -2.0, -4.0], &[1, 27, 42, 48, 8])
    }

    fn q3() -> Spectrum {
        spectrum(&[3.0, 1.0, -1.0, -3.0], &[1, 3, 3, 1])
    }

    fn fixture_spectra() -> Vec<Spectrum> {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        vec![
            odd4(),
            hamming43(),
            odd5(),
            q3(),
            spectrum(&[4.0, 2.0, 0.0, -2.0, -4.0], &[1, 4, 6, 4, 1]),
            spectrum(&[2.0, 1.0, -1.0, -2.0], &[1, 2, 2, 1]),
            spectrum(&[2.0, golden, -golden - 1.0], &[1, 2, 2]),
        ]
    }

    #[test]
    fn poly_basics() {
        let p = Poly::new(vec![1.0, 0.0, 2.0, 0.0]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(3.0), 19.0);
        assert_eq!(p.mul_x().coeffs(), &[0.0, 1.0, 0.0, 2.0]);
        let q = Poly::new(vec![-1.0, 1.0]).mul(&Poly::new(vec![1.0, 1.0]));
        assert_eq!(q.coeffs(), &[-1.0, 0.0, 1.0]);
        assert!(Poly::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(Poly::zero().eval(5.0), 0.0);
    }

    #[test]
    fn inner_product_trivia() {
        for s in fixture_spectra() {
            let one = Poly::one();
            let x = Poly::x();
            assert!((inner_product(&one, &one, &s) - 1.0).abs() < 1e-12);
            let k = s.theta(0);
            assert!(
                (inner_product(&x, &x, &s) - k).abs() < 1e-9,
                "closed 2-walks should equal the degree"
            );
        }
    }

    #[test]
    fn odd4_triangle_free_moment() {
        let s = odd4();
        let x = Poly::x();
        let x2 = Poly::new(vec![0.0, 0.0, 1.0]);
        assert!(inner_product(&x2, &x, &s).abs() < 1e-9);
    }

    #[test]
    fn odd4_predistance_values_at_k() {
        let ps = PredistanceSystem::new(&odd4(), 1e-6).unwrap();
        let expect = [1.0, 4.0, 12.0, 18.0];
        for (i, want) in expect.iter().enumerate() {
            assert!(
                (ps.value(i, 0) - want).abs() < 1e-9,
                "p_{i}(theta_0) = {} expected {want}",
                ps.value(i, 0)
            );
        }
        let total: f64 = (0..=3).map(|i| ps.value(i, 0)).sum();
        assert!((total - 35.0).abs() < 1e-9);
    }

    #[test]
    fn hamming_p2_matches_half_quadratic() {
        let ps = PredistanceSystem::new(&hamming43(), 1e-6).unwrap();
        let p2 = ps.p(2);
        let want = [-4.0, -0.5, 0.5];
        for (i, w) in want.iter().enumerate() {
            assert!(
                (p2.coeff(i) - w).abs() < 1e-9,
                "coefficient {i}: {} expected {w}",
                p2.coeff(i)
            );
        }
        let values: Vec<f64> = (0..=4).map(|j| ps.value(2, j)).collect();
        let expect = [24.0, 6.0, -3.0, -3.0, 6.0];
        for (got, want) in values.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-9, "{values:?} vs {expect:?}");
        }
    }

    #[test]
    fn odd5_dist12_values() {
        let ps = PredistanceSystem::new(&odd5(), 1e-6).unwrap();
        // p_1 + p_2 = x² + x − 5 evaluated over the mesh.
        let expect = [25.0, 7.0, -3.0, -3.0, 7.0];
        for (j, want) in expect.iter().enumerate() {
            let got = ps.value(1, j) + ps.value(2, j);
            assert!((got - want).abs() < 1e-9, "value at theta_{j}");
        }
    }

    #[test]
    fn recurrence_invariants_on_all_fixtures() {
        for s in fixture_spectra() {
            let ps = PredistanceSystem::new(&s, 1e-6).unwrap();
            let d = ps.d();
            let k = ps.k();
            // Orthogonality and normalization.
            for i in 0..=d {
                for j in 0..i {
                    let ip = inner_product(ps.p(i), ps.p(j), &s);
                    assert!(
                        ip.abs() <= 1e-8 * ps.norm_sq(i).max(1.0),
                        "p_{i} and p_{j} not orthogonal: {ip}"
                    );
                }
                let ns = norm_sq(ps.p(i), &s);
                assert!(
                    (ns - ps.value(i, 0)).abs() <= 1e-8 * ns.max(1.0),
                    "norm square vs p_{i}(theta_0)"
                );
                assert!(ps.value(i, 0) > 0.0);
            }
            // Sum rule and the two pinned coefficients.
            assert!(ps.alpha(0).abs() < 1e-9);
            assert!((ps.gamma(1) - 1.0).abs() < 1e-9);
            assert!((ps.beta(0) - k).abs() < 1e-9);
            let pre = ps.preintersection();
            for i in 0..=d {
                let sum = pre.alpha[i] + pre.beta[i] + pre.gamma[i];
                assert!((sum - k).abs() <= 1e-8 * k.max(1.0), "sum rule at {i}");
            }
            // alpha_1 = C3 / C2.
            if d >= 1 {
                assert!((ps.alpha(1) - s.moment(3) / s.moment(2)).abs() < 1e-8);
            }
            // Leading coefficient of p_i is 1/(gamma_1 … gamma_i).
            for i in 1..=d {
                let prod: f64 = (1..=i).map(|l| ps.gamma(l)).product();
                assert!(
                    (ps.p(i).leading_coeff() * prod - 1.0).abs() < 1e-8,
                    "leading coefficient of p_{i}"
                );
            }
            // q_i(theta_0) strictly increasing up to n.
            let mut prev = 0.0;
            for i in 0..=d {
                let q = ps.qsum_value(i, 0);
                assert!(q > prev + 1e-9, "q values must increase");
                prev = q;
            }
            assert!((prev - s.n() as f64).abs() < 1e-7 * s.n() as f64);
        }
    }

    #[test]
    fn gamma2_closed_form_matches_recurrence() {
        let cases = [
            (odd4(), 1.0),
            (hamming43(), 2.0),
            (odd5(), 1.0),
            (q3(), 2.0),
            (spectrum(&[2.0, 1.0, -1.0, -2.0], &[1, 2, 2, 1]), 1.0),
        ];
        for (s, want) in cases {
            let closed = gamma2_closed_form(&s).unwrap();
            assert!(
                (closed - want).abs() < 1e-9,
                "closed form {closed} vs {want}"
            );
            let ps = PredistanceSystem::new(&s, 1e-6).unwrap();
            assert!((ps.gamma(2) - closed).abs() < 1e-8);
        }
    }

    #[test]
    fn hoffman_of_complete_graph_is_x_plus_one() {
        let s = spectrum(&[4.0, -1.0], &[1, 4]);
        let h = hoffman_polynomial(&s);
        assert!((h.coeff(0) - 1.0).abs() < 1e-12);
        assert!((h.coeff(1) - 1.0).abs() < 1e-12);
        assert_eq!(h.degree(), 1);
    }

    #[test]
    fn hoffman_equals_sum_polynomial() {
        for s in [odd4(), hamming43(), q3()] {
            let ps = PredistanceSystem::new(&s, 1e-6).unwrap();
            let h = ps.hoffman();
            let qd = ps.qsum(ps.d());
            for i in 0..=h.degree().max(qd.degree()) {
                assert!(
                    (h.coeff(i) - qd.coeff(i)).abs() < 1e-8,
                    "coefficient {i}: {} vs {}",
                    h.coeff(i),
                    qd.coeff(i)
                );
            }
            assert!((h.eval(s.theta(0)) - s.n() as f64).abs() < 1e-7);
        }
    }

    #[test]
    fn apply_poly_identity_and_adjacency() {
        let g = generate_spec("cycle:6").unwrap();
        let a = apply_poly(&Poly::x(), &g);
        for u in 0..6 {
            for v in 0..6 {
                let want = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                assert_eq!(a.get(u, v), want);
            }
        }
        let one = apply_poly(&Poly::one(), &g);
        for u in 0..6 {
            for v in 0..6 {
                assert_eq!(one.get(u, v), if u == v { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn hoffman_matrix_is_all_ones() {
        for spec in ["odd:4", "hypercube:3", "cycle:6"] {
            let g = generate_spec(spec).unwrap();
            let raw = crate::spectra::eigen_symmetric(&g, &Default::default()).unwrap();
            let out = crate::spectra::cluster_spectrum(&raw, 1e-7, true).unwrap();
            let h = hoffman_polynomial(&out.spectrum);
            let m = apply_poly(&h, &g);
            assert!(
                m.max_dev_from_ones() < 1e-6,
                "{spec}: H(A) deviates from J by {}",
                m.max_dev_from_ones()
            );
        }
    }

    #[test]
    fn hamming_p2_matrix_is_distance_two_indicator() {
        let g = generate_spec("hamming:4,3").unwrap();
        let dd = distance_decomposition(&g).unwrap();
        let ps = PredistanceSystem::new(&hamming43(), 1e-6).unwrap();
        let m = apply_poly(ps.p(2), &g);
        let mut worst = 0.0f64;
        for u in 0..g.n() {
            for v in 0..g.n() {
                let want = if dd.dist(u, v) == 2 { 1.0 } else { 0.0 };
                worst = worst.max((m.get(u, v) - want).abs());
            }
        }
        assert!(worst < 1e-6, "max deviation {worst}");
    }

    #[test]
    fn invalid_spectra_are_rejected() {
        // Nonzero eigenvalue sum: alpha_0 != 0.
        let s = spectrum(&[3.0, 1.0, -1.0], &[1, 2, 2]);
        match PredistanceSystem::new(&s, 1e-6) {
            Err(OrthopolyError::NonzeroTrace { .. }) => {}
            other => panic!("expected NonzeroTrace, got {other:?}"),
        }
        // Zero trace but wrong second moment: gamma_1 != 1.
        let s = spectrum(&[4.0, 0.0, -4.0], &[1, 2, 1]);
        match PredistanceSystem::new(&s, 1e-6) {
            Err(OrthopolyError::GammaOneDeviation { gamma1 }) => {
                assert!((gamma1 - 2.0).abs() < 1e-9);
            }
            other => panic!("expected GammaOneDeviation, got {other:?}"),
        }
    }

    #[test]
    fn gamma2_denominator_guard() {
        // Spectrum of K_4: the denominator k(C3 + k − k²) vanishes because
        // every spectrum with d = 1 has C3 = k² − k.
        let s = spectrum(&[3.0, -1.0], &[1, 3]);
        match gamma2_closed_form(&s) {
            Err(OrthopolyError::SmallDenominator { .. }) => {}
            other => panic!("expected SmallDenominator, got {other:?}"),
        }
    }

    #[test]
    fn maximality_of_sum_polynomials() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for s in [odd4(), hamming43(), q3()] {
            let ps = PredistanceSystem::new(&s, 1e-6).unwrap();
            for i in 0..=ps.d() {
                let bound = ps.qsum_value(i, 0);
                for _ in 0..200 {
                    let coeffs: Vec<f64> = (0..=i).map(|_| rng.random_range(-5.0..5.0)).collect();
                    let r = Poly::new(coeffs);
                    let ns = norm_sq(&r, &s);
                    if ns < 1e-9 {
                        continue;
                    }
                    let quotient = r.eval(s.theta(0)).powi(2) / ns;
                    assert!(
                        quotient <= bound + 1e-6,
                        "degree {i}: quotient {quotient} exceeds q_i(theta_0) {bound}"
                    );
                }
            }
        }
    }
}
