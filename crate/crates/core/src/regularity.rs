//! Combinatorial regularity oracles and spectral characterizations.
//!
//! The oracles in this module check distance-regularity and strong
//! regularity directly from the definitions, by counting over all vertex
//! pairs. They are deliberately independent of the polynomial machinery so
//! that spectral verdicts elsewhere can be validated against them.
//!
//! The module also carries the spectral excess check (equality of
//! q_{d−1}(θ_0) with the average n̄_{d−1} forces distance-regularity when
//! the diameter equals d), the partial distance-regularity level, and the
//! closed-form criteria for when a distance-2 or distance-1-or-2 graph of a
//! distance-regular graph is strongly regular.

use crate::graph::{regular_degree, AverageCounts, DistanceDecomposition, Graph, IrregularWitness};
use crate::orthopoly::{apply_poly, PredistanceSystem};
use crate::spectra::Spectrum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegularityError {
    #[error("inconsistent intersection array: {reason}")]
    InconsistentArray { reason: String },
}

/// Intersection array {b_0, …, b_{D−1}; c_1, …, c_D} of a distance-regular
/// graph, with the derived a_i and distance-class sizes k_i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    b: Vec<i64>,
    c: Vec<i64>,
    a: Vec<i64>,
    k_dist: Vec<i64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<i64>, c: Vec<i64>) -> Result<Self, RegularityError> {
        let fail = |reason: String| Err(RegularityError::InconsistentArray { reason });
        if b.is_empty() || b.len() != c.len() {
            return fail("need equally long nonempty b and c sequences".into());
        }
        let diameter = b.len();
        let k = b[0];
        if k < 1 {
            return fail(format!("b_0 = {k} must be at least 1"));
        }
        if c[0] != 1 {
            return fail(format!("c_1 = {} must be 1", c[0]));
        }
        if let Some(bad) = b.iter().find(|&&x| x < 1) {
            return fail(format!("b_i = {bad} must be at least 1"));
        }
        if let Some(bad) = c.iter().find(|&&x| x < 1) {
            return fail(format!("c_i = {bad} must be at least 1"));
        }
        let mut a = Vec::with_capacity(diameter + 1);
        for i in 0..=diameter {
            let b_i = if i < diameter { b[i] } else { 0 };
            let c_i = if i > 0 { c[i - 1] } else { 0 };
            let a_i = k - b_i - c_i;
            if a_i < 0 {
                return fail(format!("a_{i} = {a_i} is negative"));
            }
            a.push(a_i);
        }
        let mut k_dist = vec![1i64];
        for i in 0..diameter {
            let prev = k_dist[i];
            let num = prev
                .checked_mul(b[i])
                .ok_or_else(|| RegularityError::InconsistentArray {
                    reason: "class size overflow".into(),
                })?;
            if num % c[i] != 0 {
                return fail(format!(
                    "k_{} b_{} = {num} is not divisible by c_{} = {}",
                    i,
                    i,
                    i + 1,
                    c[i]
                ));
            }
            k_dist.push(num / c[i]);
        }
        Ok(IntersectionArray { b, c, a, k_dist })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    pub fn k(&self) -> i64 {
        self.b[0]
    }

    pub fn n(&self) -> i64 {
        self.k_dist.iter().sum()
    }

    /// a_i for 0 ≤ i ≤ D.
    pub fn a(&self, i: usize) -> i64 {
        self.a[i]
    }

    /// b_i for 0 ≤ i ≤ D−1; b_D is 0 by convention.
    pub fn b(&self, i: usize) -> i64 {
        if i < self.b.len() {
            self.b[i]
        } else {
            0
        }
    }

    /// c_i for 1 ≤ i ≤ D; c_0 is 0 by convention.
    pub fn c(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// |Γ_i(u)| for 0 ≤ i ≤ D.
    pub fn k_dist(&self, i: usize) -> i64 {
        self.k_dist[i]
    }
}

impl std::fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

/// Which of the three neighbour counts disagreed between two vertex pairs at
/// the same distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    C,
    A,
    B,
}

impl std::fmt::Display for CountKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CountKind::C => "c",
            CountKind::A => "a",
            CountKind::B => "b",
        })
    }
}

/// First pair of vertices contradicting distance-regularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("{kind}_{distance}({u},{v}) = {found} but an earlier pair gave {expected}")]
pub struct DrgViolation {
    pub u: usize,
    pub v: usize,
    pub distance: usize,
    pub kind: CountKind,
    pub expected: usize,
    pub found: usize,
}

/// Checks the definition of distance-regularity over every ordered vertex
/// pair: the counts |Γ(v) ∩ Γ_{i−1}(u)|, |Γ(v) ∩ Γ_i(u)| and
/// |Γ(v) ∩ Γ_{i+1}(u)| may depend only on i = dist(u,v).
pub fn drg_oracle(
    g: &Graph,
    dd: &DistanceDecomposition,
) -> Result<IntersectionArray, DrgViolation> {
    let diameter = dd.diameter();
    assert!(diameter >= 1, "oracle needs a graph with at least one edge");
    let mut ref_counts: Vec<Option<[usize; 3]>> = vec![None; diameter + 1];
    for u in 0..g.n() {
        for v in 0..g.n() {
            let i = dd.dist(u, v);
            let mut counts = [0usize; 3]; // c_i, a_i, b_i
            for w in g.neighbors(v) {
                let dw = dd.dist(u, w);
                if dw + 1 == i {
                    counts[0] += 1;
                } else if dw == i {
                    counts[1] += 1;
                } else if dw == i + 1 {
                    counts[2] += 1;
                }
            }
            match ref_counts[i] {
                None => ref_counts[i] = Some(counts),
                Some(reference) => {
                    for (slot, kind) in [CountKind::C, CountKind::A, CountKind::B]
                        .into_iter()
                        .enumerate()
                    {
                        if counts[slot] != reference[slot] {
                            return Err(DrgViolation {
                                u,
                                v,
                                distance: i,
                                kind,
                                expected: reference[slot],
                                found: counts[slot],
                            });
                        }
                    }
                }
            }
        }
    }
    let b: Vec<i64> = (0..diameter)
        .map(|i| ref_counts[i].unwrap()[2] as i64)
        .collect();
    let c: Vec<i64> = (1..=diameter)
        .map(|i| ref_counts[i].unwrap()[0] as i64)
        .collect();
    Ok(IntersectionArray::new(b, c)
        .expect("constant counts over a connected graph form a consistent array"))
}

/// Parameters (n, k, λ, μ) of a strongly regular graph. Degenerate cases are
/// allowed: a disjoint union of complete graphs has μ = 0, a complete graph
/// has no pairs at distance 2 (μ defaults to 0), an empty graph no edges
/// (λ defaults to 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// First vertex pair contradicting strong regularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub enum SrgViolation {
    #[error("{0}")]
    Irregular(IrregularWitness),
    #[error("adjacent pair ({u},{v}) has {found} common neighbours, expected {expected}")]
    LambdaMismatch {
        u: usize,
        v: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-adjacent pair ({u},{v}) has {found} common neighbours, expected {expected}")]
    MuMismatch {
        u: usize,
        v: usize,
        expected: usize,
        found: usize,
    },
}

/// Checks strong regularity by exhaustive common-neighbour counts. The graph
/// may be disconnected; unions of complete graphs pass with μ = 0.
pub fn srg_oracle(g: &Graph) -> Result<SrgParams, SrgViolation> {
    let k = regular_degree(g).map_err(SrgViolation::Irregular)?;
    let mut lambda: Option<(usize, usize, usize)> = None;
    let mut mu: Option<(usize, usize, usize)> = None;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let common = g.common_neighbors(u, v);
            let slot = if g.has_edge(u, v) {
                &mut lambda
            } else {
                &mut mu
            };
            match *slot {
                None => *slot = Some((common, u, v)),
                Some((expected, ..)) if expected == common => {}
                Some((expected, ..)) => {
                    return Err(if g.has_edge(u, v) {
                        SrgViolation::LambdaMismatch {
                            u,
                            v,
                            expected,
                            found: common,
                        }
                    } else {
                        SrgViolation::MuMismatch {
                            u,
                            v,
                            expected,
                            found: common,
                        }
                    });
                }
            }
        }
    }
    Ok(SrgParams {
        n: g.n(),
        k,
        lambda: lambda.map_or(0, |(x, ..)| x),
        mu: mu.map_or(0, |(x, ..)| x),
    })
}

/// Selects which derived graph to build from a distance decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistancePower {
    /// Edges between vertices at distance exactly 2.
    Dist2,
    /// Edges between vertices at distance 1 or 2.
    Dist12,
}

impl std::fmt::Display for DistancePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DistancePower::Dist2 => "distance-2",
            DistancePower::Dist12 => "distance-1-or-2",
        })
    }
}

/// Builds the distance-2 or distance-1-or-2 graph. For a graph of diameter
/// at most 1 the distance-2 graph is empty.
pub fn distance_power_graph(dd: &DistanceDecomposition, which: DistancePower) -> Graph {
    let n = dd.n();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let d = dd.dist(u, v);
            let keep = match which {
                DistancePower::Dist2 => d == 2,
                DistancePower::Dist12 => d == 1 || d == 2,
            };
            if keep {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Largest m ≤ diameter with ‖p_i(A) − A_i‖_∞ ≤ `entry_tol` for all i ≤ m.
pub fn partial_dr_level(
    g: &Graph,
    ps: &PredistanceSystem,
    dd: &DistanceDecomposition,
    entry_tol: f64,
) -> usize {
    let top = dd.diameter().min(ps.d());
    for i in 0..=top {
        let m = apply_poly(ps.p(i), g);
        let mut worst = 0.0f64;
        for u in 0..g.n() {
            for v in 0..g.n() {
                let want = if dd.dist(u, v) == i { 1.0 } else { 0.0 };
                worst = worst.max((m.get(u, v) - want).abs());
            }
        }
        if worst > entry_tol {
            return i - 1;
        }
    }
    top
}

/// One rung of the spectral excess ladder: q_m(θ_0) against n̄_m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGap {
    pub m: usize,
    pub q_value: f64,
    pub nbar: f64,
    pub gap: f64,
    pub equal: bool,
}

/// Conclusion of the stepwise variant: starting from a combinatorially
/// established partial level, how far the q_m(θ_0) = n̄_m equalities extend
/// it (level d means distance-regular).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepwiseExtension {
    pub from_level: usize,
    pub extended_level: usize,
}

/// Outcome of the spectral excess check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralExcessReport {
    pub d: usize,
    pub diameter: usize,
    /// The distance-regularity conclusion needs diameter = d.
    pub applicable: bool,
    pub note: Option<String>,
    /// Gaps q_m(θ_0) − n̄_m for m = 1..=d−1.
    pub levels: Vec<LevelGap>,
    /// Partial level implied by chaining equalities from level 0; equals d
    /// when the graph is concluded distance-regular.
    pub implied_partial_level: Option<usize>,
    pub distance_regular: Option<bool>,
    pub stepwise: Option<StepwiseExtension>,
}

/// Compares q_m(θ_0) with n̄_m for every level. Equality at m = d−1 with
/// diameter d proves distance-regularity; lower equalities extend a
/// combinatorially `established` partial level stepwise.
pub fn spectral_excess_check(
    ps: &PredistanceSystem,
    ac: &AverageCounts,
    established: Option<usize>,
    tol: f64,
) -> SpectralExcessReport {
    let d = ps.d();
    let diameter = ac.diameter();
    let applicable = diameter == d;
    let levels: Vec<LevelGap> = (1..d)
        .map(|m| {
            let q_value = ps.qsum_value(m, 0);
            let nbar = ac.nbar_f64(m);
            let gap = q_value - nbar;
            LevelGap {
                m,
                q_value,
                nbar,
                gap,
                equal: gap.abs() <= tol * f64::max(1.0, nbar),
            }
        })
        .collect();
    if !applicable {
        return SpectralExcessReport {
            d,
            diameter,
            applicable,
            note: Some(format!(
                "not applicable: diameter {diameter} is smaller than d = {d}"
            )),
            levels,
            implied_partial_level: None,
            distance_regular: None,
            stepwise: None,
        };
    }
    let distance_regular = if d <= 1 { true } else { levels[d - 2].equal };
    let chain = levels.iter().take_while(|l| l.equal).count();
    let implied = if distance_regular { d } else { chain };
    let stepwise = established.map(|m0| {
        let mut m = m0.min(d);
        while m < d.saturating_sub(1) && levels[m].equal {
            m += 1;
        }
        if m + 1 == d && (d <= 1 || levels[d - 2].equal) {
            m = d;
        }
        StepwiseExtension {
            from_level: m0,
            extended_level: m,
        }
    });
    SpectralExcessReport {
        d,
        diameter,
        applicable,
        note: None,
        levels,
        implied_partial_level: Some(implied),
        distance_regular: Some(distance_regular),
        stepwise,
    }
}

/// A named number inside a criterion check, for auditable reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

fn named(name: &str, value: f64) -> NamedValue {
    NamedValue {
        name: name.to_string(),
        value,
    }
}

/// One closed-form criterion, evaluated with its witness numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub id: String,
    pub graph: DistancePower,
    pub satisfied: bool,
    pub values: Vec<NamedValue>,
    pub note: Option<String>,
}

/// All criteria applicable to the array's diameter, plus agreement between
/// equivalent formulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub applicable: bool,
    pub d: usize,
    pub note: Option<String>,
    pub checks: Vec<CriterionCheck>,
    /// Whether every group of equivalent criteria reached the same verdict.
    pub consistent: bool,
}

fn nearest_eigenvalue(s: &Spectrum, value: f64) -> f64 {
    *s.distinct()
        .iter()
        .min_by(|a, b| (*a - value).abs().partial_cmp(&(*b - value).abs()).unwrap())
        .unwrap()
}

fn has_eigenvalue(s: &Spectrum, value: f64, tol: f64) -> bool {
    (nearest_eigenvalue(s, value) - value).abs() <= tol
}

/// Evaluates the strong-regularity criteria for the distance-2 and
/// distance-1-or-2 graphs of a distance-regular graph with diameter 3 or 4.
pub fn drg_criteria(ia: &IntersectionArray, s: &Spectrum, tol: f64) -> CriteriaReport {
    let d = ia.diameter();
    if d != s.d() {
        return CriteriaReport {
            applicable: false,
            d,
            note: Some(format!(
                "array diameter {d} does not match the {} distinct eigenvalues",
                s.d() + 1
            )),
            checks: Vec::new(),
            consistent: true,
        };
    }
    if d != 3 && d != 4 {
        return CriteriaReport {
            applicable: false,
            d,
            note: Some("criteria are defined for diameter 3 or 4".to_string()),
            checks: Vec::new(),
            consistent: true,
        };
    }
    let mut checks = Vec::new();
    let consistent = if d == 3 {
        let (a1, a2, a3) = (ia.a(1), ia.a(2), ia.a(3));
        let (b1, b2) = (ia.b(1), ia.b(2));
        let c3 = ia.c(3);
        let k = ia.k();

        let lhs = c3 * (a3 + a2 - a1);
        let rhs = b1 * a2;
        checks.push(CriterionCheck {
            id: "dist2-brouwer-array".to_string(),
            graph: DistancePower::Dist2,
            satisfied: lhs == rhs,
            values: vec![
                named("c3*(a3+a2-a1)", lhs as f64),
                named("b1*a2", rhs as f64),
            ],
            note: None,
        });

        let value = (a2 - c3) as f64;
        checks.push(CriterionCheck {
            id: "dist2-eigenvalue-a2-c3".to_string(),
            graph: DistancePower::Dist2,
            satisfied: has_eigenvalue(s, value, tol),
            values: vec![
                named("a2-c3", value),
                named("nearest-eigenvalue", nearest_eigenvalue(s, value)),
            ],
            note: None,
        });

        checks.push(CriterionCheck {
            id: "dist12-eigenvalue-minus-one".to_string(),
            graph: DistancePower::Dist12,
            satisfied: has_eigenvalue(s, -1.0, tol),
            values: vec![named("nearest-eigenvalue", nearest_eigenvalue(s, -1.0))],
            note: None,
        });

        checks.push(CriterionCheck {
            id: "dist12-degree-identity".to_string(),
            graph: DistancePower::Dist12,
            satisfied: k == b2 + c3 - 1,
            values: vec![named("k", k as f64), named("b2+c3-1", (b2 + c3 - 1) as f64)],
            note: None,
        });

        let value = (a3 - b2) as f64;
        checks.push(CriterionCheck {
            id: "dist12-eigenvalue-a3-b2".to_string(),
            graph: DistancePower::Dist12,
            satisfied: has_eigenvalue(s, value, tol),
            values: vec![
                named("a3-b2", value),
                named("nearest-eigenvalue", nearest_eigenvalue(s, value)),
            ],
            note: None,
        });

        let dist2_agree = checks[0].satisfied == checks[1].satisfied;
        let dist12_agree = checks[2].satisfied == checks[3].satisfied
            && checks[3].satisfied == checks[4].satisfied;
        dist2_agree && dist12_agree
    } else {
        let sum14 = s.theta(1) + s.theta(4);
        let sum23 = s.theta(2) + s.theta(3);
        let a1 = ia.a(1) as f64;
        let c2 = ia.c(2) as f64;
        let eq = |x: f64, y: f64| (x - y).abs() <= tol;

        checks.push(CriterionCheck {
            id: "dist2-eigenvalue-sums".to_string(),
            graph: DistancePower::Dist2,
            satisfied: eq(sum14, a1) && eq(sum23, a1),
            values: vec![
                named("theta1+theta4", sum14),
                named("a1", a1),
                named("theta2+theta3", sum23),
            ],
            note: None,
        });

        checks.push(CriterionCheck {
            id: "dist12-eigenvalue-sums".to_string(),
            graph: DistancePower::Dist12,
            satisfied: eq(sum14, a1 - c2) && eq(sum23, a1 - c2),
            values: vec![
                named("theta1+theta4", sum14),
                named("a1-c2", a1 - c2),
                named("theta2+theta3", sum23),
            ],
            note: Some("criterion read for the distance 1-or-2 graph".to_string()),
        });
        true
    };
    CriteriaReport {
        applicable: true,
        d,
        note: None,
        checks,
        consistent,
    }
}
