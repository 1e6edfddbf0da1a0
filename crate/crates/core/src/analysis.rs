//! End-to-end pipeline: from a graph to a fully cross-checked report.
//!
//! The pipeline computes everything both ways wherever two independent
//! routes exist: spectral verdicts (predistance polynomials, excess bounds,
//! closed-form criteria) are compared against combinatorial oracles that
//! count over vertex pairs. Disagreements are surfaced as warnings in the
//! report instead of being silently reconciled.

use crate::excess::{self, ExcessTheorem, TheoremKind, TheoremOutcome, Verdict};
use crate::graph::{
    average_counts, distance_decomposition, regular_degree, DisconnectedWitness, Graph,
    IrregularWitness,
};
use crate::numeric::ExactReal;
use crate::orthopoly::{
    apply_poly, gamma2_closed_form, predistance_system, OrthopolyError, PredistanceSystem,
    Preintersection,
};
use crate::regularity::{
    distance_power_graph, drg_criteria, drg_oracle, partial_dr_level, spectral_excess_check,
    srg_oracle, CriteriaReport, DistancePower, DrgViolation, IntersectionArray,
    SpectralExcessReport, SrgParams, SrgViolation,
};
use crate::spectra::{cluster_spectrum, eigen_symmetric, JacobiConfig, SpectraError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numerical thresholds used throughout one analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative gap below which raw eigenvalues merge into one cluster.
    pub cluster: f64,
    /// Relative tolerance for bound equalities and eigenvalue identities.
    pub equality: f64,
    /// Absolute entrywise tolerance for matrix identities.
    pub entry: f64,
    /// Snap near-integer cluster means to integers.
    pub snap: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster: 1e-7,
            equality: 1e-6,
            entry: 1e-6,
            snap: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub tolerances: Tolerances,
    /// Restrict the run to these registered theorem names; None runs all.
    pub theorems: Option<Vec<String>>,
    pub jacobi: JacobiConfig,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error(transparent)]
    NotRegular(#[from] IrregularWitness),
    #[error(transparent)]
    Disconnected(#[from] DisconnectedWitness),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Orthopoly(#[from] OrthopolyError),
    #[error(
        "unknown theorem name {0:?}; registered names are d3-dist2, d3-dist12, d4-dist2, d4-dist12"
    )]
    UnknownTheorem(String),
}

/// The clustered spectrum as serialised in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub distinct: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Per distinct eigenvalue: whether the cluster mean was snapped.
    pub snapped: Vec<bool>,
}

/// Combinatorial findings about one derived graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedGraphSummary {
    pub which: DistancePower,
    pub edge_count: usize,
    pub srg: Option<SrgParams>,
    pub violation: Option<SrgViolation>,
}

/// One theorem conclusion checked against the combinatorial oracles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementCheck {
    pub theorem: TheoremKind,
    pub j: usize,
    /// The bound was tight.
    pub spectral_equality: bool,
    /// The oracle-side conjunction the tight bound is equivalent to.
    pub combinatorial: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub n: usize,
    pub degree: usize,
    pub edge_count: usize,
    pub diameter: usize,
    pub d: usize,
    pub spectrum: SpectrumSummary,
    /// Average distance-class sizes kbar_0 ..= kbar_D, exact.
    pub kbar: Vec<ExactReal>,
    /// Average ball sizes nbar_0 ..= nbar_D, exact.
    pub nbar: Vec<ExactReal>,
    pub preintersection: Preintersection,
    /// gamma_2 from the recurrence, when d >= 2.
    pub gamma2: Option<f64>,
    /// gamma_2 from the moment closed form, as a cross-check.
    pub gamma2_closed_form: Option<f64>,
    /// predistance_values[i][j] = p_i(theta_j).
    pub predistance_values: Vec<Vec<f64>>,
    /// Largest entrywise deviation of H(A) from the all-ones matrix.
    pub hoffman_deviation: f64,
    /// Largest m with p_i(A) equal to the distance-i matrix for all i <= m.
    pub partial_level: usize,
    pub excess: SpectralExcessReport,
    pub intersection_array: Option<IntersectionArray>,
    pub drg_violation: Option<DrgViolation>,
    /// Strong regularity of the graph itself.
    pub srg: Option<SrgParams>,
    pub derived: Vec<DerivedGraphSummary>,
    /// Closed-form criteria, present when the graph is distance-regular.
    pub criteria: Option<CriteriaReport>,
    pub theorems: Vec<TheoremOutcome>,
    pub agreement: Vec<AgreementCheck>,
    pub warnings: Vec<String>,
}

/// Whether the eigenvalue pairs that must coincide in the derived graph of
/// variant (`kind`, `j`) actually do.
fn merge_pattern_holds(kind: TheoremKind, j: usize, ps: &PredistanceSystem, tol: f64) -> bool {
    let s = ps.spectrum();
    let value = |i: usize| match kind.graph() {
        DistancePower::Dist2 => ps.value(2, i),
        DistancePower::Dist12 => s.theta(i) + ps.value(2, i),
    };
    let scale = (0..=ps.d()).fold(1.0f64, |acc, i| acc.max(value(i).abs()));
    let pairs: &[(usize, usize)] = match (kind.d(), j) {
        (3, 1) => &[(1, 3)],
        (3, 2) => &[(1, 2)],
        _ => &[(1, 4), (2, 3)],
    };
    pairs
        .iter()
        .all(|&(a, b)| (value(a) - value(b)).abs() <= tol * scale)
}

/// Runs the full pipeline on a connected regular graph.
pub fn analyze_graph(g: &Graph, opts: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    if g.n() == 0 {
        return Err(AnalysisError::EmptyGraph);
    }
    let selected: Vec<&'static dyn ExcessTheorem> = match &opts.theorems {
        None => excess::registry().to_vec(),
        Some(names) => names
            .iter()
            .map(|name| {
                excess::find(name).ok_or_else(|| AnalysisError::UnknownTheorem(name.clone()))
            })
            .collect::<Result<_, _>>()?,
    };
    let tol = opts.tolerances;
    let mut warnings = Vec::new();

    let degree = regular_degree(g)?;
    let dd = distance_decomposition(g)?;
    let ac = average_counts(&dd);

    let raw = eigen_symmetric(g, &opts.jacobi)?;
    let clustered = cluster_spectrum(&raw, tol.cluster, tol.snap)?;
    for a in &clustered.ambiguities {
        warnings.push(format!(
            "eigenvalue clusters {} and {} are separated by only {:e} (merge threshold {:e})",
            a.upper, a.lower, a.gap, a.merge_threshold
        ));
    }
    let spectrum = clustered.spectrum;
    spectrum.validate_regular(degree as f64, tol.equality)?;

    let ps = predistance_system(&spectrum, tol.equality)?;
    let d = ps.d();

    let gamma2 = (d >= 2).then(|| ps.gamma(2));
    let gamma2_closed = match gamma2_closed_form(&spectrum) {
        Ok(v) => Some(v),
        Err(e) => {
            if d >= 2 {
                warnings.push(format!("gamma2 closed form unavailable: {e}"));
            }
            None
        }
    };
    if let (Some(a), Some(b)) = (gamma2, gamma2_closed) {
        if (a - b).abs() > tol.equality * f64::max(1.0, a.abs()) {
            warnings.push(format!(
                "gamma2 mismatch: recurrence gives {a}, closed form gives {b}"
            ));
        }
    }

    let hoffman_deviation = apply_poly(ps.hoffman(), g).max_dev_from_ones();
    if hoffman_deviation > tol.entry {
        warnings.push(format!(
            "Hoffman identity degraded: max |H(A) - J| entry is {hoffman_deviation:e}"
        ));
    }

    let partial_level = partial_dr_level(g, &ps, &dd, tol.entry);
    let excess_report = spectral_excess_check(&ps, &ac, Some(partial_level), tol.equality);

    let (intersection_array, drg_violation) = if dd.diameter() >= 1 {
        match drg_oracle(g, &dd) {
            Ok(ia) => (Some(ia), None),
            Err(v) => (None, Some(v)),
        }
    } else {
        (None, None)
    };

    if excess_report.applicable {
        if let Some(spectral_drg) = excess_report.distance_regular {
            if spectral_drg != intersection_array.is_some() {
                warnings.push(format!(
                    "distance-regularity disagreement: excess check says {spectral_drg}, \
                     counting oracle says {}",
                    intersection_array.is_some()
                ));
            }
        }
        if excess_report.implied_partial_level != Some(partial_level) {
            warnings.push(format!(
                "partial level disagreement: equalities imply {:?}, counting gives {partial_level}",
                excess_report.implied_partial_level
            ));
        }
    }

    let srg = srg_oracle(g).ok();

    let derived: Vec<DerivedGraphSummary> = [DistancePower::Dist2, DistancePower::Dist12]
        .into_iter()
        .map(|which| {
            let h = distance_power_graph(&dd, which);
            let (srg, violation) = match srg_oracle(&h) {
                Ok(params) => (Some(params), None),
                Err(v) => (None, Some(v)),
            };
            DerivedGraphSummary {
                which,
                edge_count: h.edge_count(),
                srg,
                violation,
            }
        })
        .collect();
    let derived_srg_ok = |which: DistancePower| {
        derived
            .iter()
            .find(|s| s.which == which)
            .is_some_and(|s| s.srg.is_some())
    };

    let criteria = intersection_array
        .as_ref()
        .map(|ia| drg_criteria(ia, &spectrum, tol.equality));
    if let Some(report) = criteria.as_ref().filter(|r| r.applicable) {
        if !report.consistent {
            warnings.push("equivalent closed-form criteria disagree among themselves".into());
        }
        for check in &report.checks {
            if check.satisfied != derived_srg_ok(check.graph) {
                warnings.push(format!(
                    "criterion {} ({}) disagrees with the counting oracle",
                    check.id, check.graph
                ));
            }
        }
    }

    let theorems: Vec<TheoremOutcome> = selected
        .iter()
        .map(|t| t.run(&ps, &ac, tol.equality))
        .collect();

    let mut agreement = Vec::new();
    for outcome in theorems.iter().filter(|o| o.applicable) {
        for report in &outcome.reports {
            let spectral_equality = report.verdict == Verdict::Equality;
            let graph_side = match outcome.theorem.d() {
                3 => intersection_array.is_some(),
                _ => partial_level >= 2,
            };
            let combinatorial = graph_side
                && derived_srg_ok(outcome.graph)
                && merge_pattern_holds(outcome.theorem, report.j, &ps, tol.equality);
            let agree = spectral_equality == combinatorial;
            if !agree {
                warnings.push(format!(
                    "theorem {} (j = {}) disagrees with the counting oracles",
                    outcome.theorem, report.j
                ));
            }
            agreement.push(AgreementCheck {
                theorem: outcome.theorem,
                j: report.j,
                spectral_equality,
                combinatorial,
                agree,
            });
        }
    }

    Ok(AnalysisReport {
        schema_version: 1,
        n: g.n(),
        degree,
        edge_count: g.edge_count(),
        diameter: dd.diameter(),
        d,
        spectrum: SpectrumSummary {
            distinct: spectrum.distinct().to_vec(),
            multiplicities: spectrum.multiplicities().to_vec(),
            snapped: clustered.snapped,
        },
        kbar: (0..=dd.diameter())
            .map(|i| ExactReal::from_rational(ac.kbar(i)))
            .collect(),
        nbar: (0..=dd.diameter())
            .map(|i| ExactReal::from_rational(ac.nbar(i)))
            .collect(),
        preintersection: ps.preintersection(),
        gamma2,
        gamma2_closed_form: gamma2_closed,
        predistance_values: (0..=d)
            .map(|i| (0..=d).map(|j| ps.value(i, j)).collect())
            .collect(),
        hoffman_deviation,
        partial_level,
        excess: excess_report,
        intersection_array,
        drg_violation,
        srg,
        derived,
        criteria,
        theorems,
        agreement,
        warnings,
    })
}
