//! Text rendering of analysis reports.
//!
//! JSON output serialises [`AnalysisReport`] directly; this module is the
//! human-readable view of the same data. Every number shown here comes from
//! the report, so the two output modes never disagree.

use specx_core::excess::{BoundDirection, DerivedSrg, ExcessReport, TheoremOutcome, Verdict};
use specx_core::numeric::ExactReal;
use specx_core::orthopoly::Poly;
use specx_core::AnalysisReport;

/// Formats a float compactly: integers without a decimal point, everything
/// else with at most nine decimals.
pub(crate) fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x == x.round() && x.abs() < 1e15 {
        return format!("{:.0}", x);
    }
    let mut s = format!("{:.9}", x);
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

fn fmt_exact(x: &ExactReal) -> String {
    match &x.exact {
        Some(e) => e.clone(),
        None => fmt_float(x.value),
    }
}

fn exact_list(xs: &[ExactReal]) -> String {
    let parts: Vec<String> = xs.iter().map(fmt_exact).collect();
    format!("[{}]", parts.join(", "))
}

fn float_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_float(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// One `value^multiplicity` factor of a spectrum line, parenthesised when
/// the value is negative or fractional.
fn spectrum_factor(value: f64, multiplicity: usize) -> String {
    let v = fmt_float(value);
    if v.starts_with('-') || v.contains('.') {
        format!("({v})^{multiplicity}")
    } else {
        format!("{v}^{multiplicity}")
    }
}

pub(crate) fn spectrum_line(values: &[f64], multiplicities: &[usize]) -> String {
    values
        .iter()
        .zip(multiplicities)
        .map(|(&v, &m)| spectrum_factor(v, m))
        .collect::<Vec<_>>()
        .join(" ")
}

fn derived_srg_line(d: &DerivedSrg) -> String {
    let factors: Vec<String> = d
        .eigenvalues
        .iter()
        .map(|e| spectrum_factor(e.value, e.multiplicity))
        .collect();
    let tag = if d.reconstructed {
        " (reconstructed)"
    } else {
        ""
    };
    format!("{}{}", factors.join(" "), tag)
}

/// Renders a polynomial in decreasing degree order, e.g. `x^2 + 2x + 1`.
pub(crate) fn poly_str(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let coeffs = p.coeffs();
    let mut parts: Vec<String> = Vec::new();
    for (i, &a) in coeffs.iter().enumerate().rev() {
        if a == 0.0 {
            continue;
        }
        let mag = a.abs();
        let coeff = if i > 0 && (mag - 1.0).abs() < 1e-12 {
            String::new()
        } else {
            fmt_float(mag)
        };
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let term = format!("{coeff}{var}");
        if parts.is_empty() {
            if a < 0.0 {
                parts.push(format!("-{term}"));
            } else {
                parts.push(term);
            }
        } else if a < 0.0 {
            parts.push(format!("- {term}"));
        } else {
            parts.push(format!("+ {term}"));
        }
    }
    parts.join(" ")
}

pub(crate) fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Equality => "equality",
        Verdict::Strict => "strict",
        Verdict::OptimizerUndefined => "optimizer undefined",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn push_excess_report(out: &mut String, r: &ExcessReport) {
    let relation = match r.direction {
        BoundDirection::AtLeastTarget => ">=",
        BoundDirection::AtMostTarget => "<=",
    };
    let tau = r.tau.map_or("undefined".to_string(), fmt_float);
    let phi = r.phi.map_or("undefined".to_string(), fmt_float);
    out.push_str(&format!(
        "  j={}: s = {}; tau = {}; phi = {} ({} {} = {}); verdict: {}\n",
        r.j,
        poly_str(&r.s),
        tau,
        phi,
        relation,
        r.bound_name,
        fmt_float(r.bound_target),
        verdict_str(r.verdict),
    ));
    out.push_str(&format!(
        "       s(theta) = {}; gamma2 = {}",
        float_list(&r.s_values),
        fmt_float(r.gamma2),
    ));
    if let Some(gap) = r.gap {
        out.push_str(&format!("; gap = {}", fmt_float(gap)));
    }
    out.push('\n');
    if let Some(srg) = &r.derived_srg {
        out.push_str(&format!(
            "       derived SRG spectrum: {}\n",
            derived_srg_line(srg)
        ));
    }
    for note in &r.notes {
        out.push_str(&format!("       note: {note}\n"));
    }
}

fn push_theorem(out: &mut String, t: &TheoremOutcome) {
    if t.applicable {
        out.push_str(&format!(
            "theorem {} ({}): applicable\n",
            t.theorem, t.graph
        ));
        for r in &t.reports {
            push_excess_report(out, r);
        }
    } else {
        let reason = t.reason.as_deref().unwrap_or("not applicable");
        out.push_str(&format!(
            "theorem {} ({}): not applicable ({reason})\n",
            t.theorem, t.graph
        ));
    }
}

pub(crate) fn report_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "n = {}  degree = {}  edges = {}  diameter = {}  distinct eigenvalues = {}\n",
        r.n,
        r.degree,
        r.edge_count,
        r.diameter,
        r.d + 1,
    ));
    out.push_str(&format!(
        "spectrum: {}\n",
        spectrum_line(&r.spectrum.distinct, &r.spectrum.multiplicities)
    ));
    out.push_str(&format!(
        "kbar = {}  nbar = {}\n",
        exact_list(&r.kbar),
        exact_list(&r.nbar)
    ));
    out.push_str(&format!(
        "preintersection: alpha = {}  beta = {}  gamma = {}\n",
        float_list(&r.preintersection.alpha),
        float_list(&r.preintersection.beta),
        float_list(&r.preintersection.gamma),
    ));
    if let (Some(g), Some(gc)) = (r.gamma2, r.gamma2_closed_form) {
        out.push_str(&format!(
            "gamma2 = {} (closed form {})\n",
            fmt_float(g),
            fmt_float(gc)
        ));
    }
    let p_at_theta0: Vec<f64> = r.predistance_values.iter().map(|row| row[0]).collect();
    out.push_str(&format!(
        "predistance values at theta0: {}\n",
        float_list(&p_at_theta0)
    ));
    out.push_str(&format!(
        "Hoffman deviation from all-ones: {:.2e}\n",
        r.hoffman_deviation
    ));
    out.push_str(&format!(
        "partial distance-regularity level: {} of {}\n",
        r.partial_level, r.d
    ));

    out.push_str("spectral excess check");
    if r.excess.applicable {
        out.push_str(":\n");
    } else {
        let note = r.excess.note.as_deref().unwrap_or("not applicable");
        out.push_str(&format!(" (not conclusive: {note}):\n"));
    }
    for level in &r.excess.levels {
        let status = if level.equal {
            "equal".to_string()
        } else {
            format!("gap {}", fmt_float(level.gap))
        };
        out.push_str(&format!(
            "  q_{}(theta0) = {} vs nbar_{} = {}  ({status})\n",
            level.m,
            fmt_float(level.q_value),
            level.m,
            fmt_float(level.nbar),
        ));
    }
    match r.excess.distance_regular {
        Some(true) => out.push_str("  conclusion: distance-regular\n"),
        Some(false) => out.push_str("  conclusion: not distance-regular\n"),
        None => {}
    }
    if let Some(sw) = &r.excess.stepwise {
        out.push_str(&format!(
            "  stepwise: level {} extends to {}\n",
            sw.from_level, sw.extended_level
        ));
    }

    match &r.intersection_array {
        Some(ia) => out.push_str(&format!("intersection array: {ia}\n")),
        None => {
            out.push_str("intersection array: none");
            if let Some(v) = &r.drg_violation {
                out.push_str(&format!(" ({v})"));
            }
            out.push('\n');
        }
    }
    match &r.srg {
        Some(p) => out.push_str(&format!(
            "strongly regular: ({}, {}, {}, {})\n",
            p.n, p.k, p.lambda, p.mu
        )),
        None => out.push_str("strongly regular: no\n"),
    }
    for dg in &r.derived {
        out.push_str(&format!(
            "{} graph: {} edges; srg: ",
            dg.which, dg.edge_count
        ));
        match (&dg.srg, &dg.violation) {
            (Some(p), _) => out.push_str(&format!("({}, {}, {}, {})\n", p.n, p.k, p.lambda, p.mu)),
            (None, Some(v)) => out.push_str(&format!("no ({v})\n")),
            (None, None) => out.push_str("no\n"),
        }
    }

    if let Some(criteria) = &r.criteria {
        if criteria.applicable {
            out.push_str(&format!(
                "closed-form criteria (consistent: {}):\n",
                yes_no(criteria.consistent)
            ));
            for check in &criteria.checks {
                let values: Vec<String> = check
                    .values
                    .iter()
                    .map(|nv| format!("{} = {}", nv.name, fmt_float(nv.value)))
                    .collect();
                out.push_str(&format!(
                    "  [{}] {} ({}): {}\n",
                    if check.satisfied { "sat" } else { " - " },
                    check.id,
                    check.graph,
                    values.join(", "),
                ));
                if let Some(note) = &check.note {
                    out.push_str(&format!("        note: {note}\n"));
                }
            }
        } else if let Some(note) = &criteria.note {
            out.push_str(&format!("closed-form criteria: not applicable ({note})\n"));
        }
    }

    for t in &r.theorems {
        push_theorem(&mut out, t);
    }

    if r.agreement.is_empty() {
        out.push_str("oracle agreement: no applicable theorem variants\n");
    } else {
        out.push_str("oracle agreement:\n");
        for a in &r.agreement {
            out.push_str(&format!(
                "  {} j={}: spectral equality = {}, combinatorial = {} -> {}\n",
                a.theorem,
                a.j,
                yes_no(a.spectral_equality),
                yes_no(a.combinatorial),
                if a.agree { "agree" } else { "DISAGREE" },
            ));
        }
    }

    if r.warnings.is_empty() {
        out.push_str("warnings: none\n");
    } else {
        out.push_str("warnings:\n");
        for w in &r.warnings {
            out.push_str(&format!("  - {w}\n"));
        }
    }
    out
}
