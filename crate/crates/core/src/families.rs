//! Named graph family generators.
//!
//! Each family implements [`GraphFamily`] and is registered under a stable
//! name; callers select one at runtime from a spec string such as
//! `"odd:4"` or `"hamming:4,3"`. The registry is the single source of truth
//! for which families exist, so the CLI and error messages stay in sync
//! with the implementations.

use crate::graph::Graph;
use thiserror::Error;

/// Generation refuses to build graphs above this order; it exists to turn
/// absurd parameters into an error instead of an allocation stampede.
pub const MAX_GENERATED_VERTICES: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{name}`; available: {available}")]
    UnknownFamily { name: String, available: String },
    #[error("family `{family}` expects {expected} parameter(s), got {got}")]
    WrongArity {
        family: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("family `{family}`: {reason}")]
    InvalidParameter {
        family: &'static str,
        reason: String,
    },
    #[error("family `{family}` with these parameters has {n} vertices, above the limit {max}")]
    TooLarge {
        family: &'static str,
        n: u64,
        max: u64,
    },
    #[error("malformed family spec `{spec}`; expected NAME or NAME:ARG[,ARG…]")]
    BadSpec { spec: String },
}

/// A graph family that can be generated from integer parameters.
pub trait GraphFamily: Send + Sync {
    /// Registry name, e.g. `"kneser"`.
    fn name(&self) -> &'static str;
    /// Human-readable parameter synopsis, e.g. `"kneser:v,t (v >= 2t, t >= 1)"`.
    fn usage(&self) -> &'static str;
    /// Number of parameters the family takes.
    fn arity(&self) -> usize;
    /// Builds the graph. `params.len()` is already checked against
    /// [`GraphFamily::arity`] by [`generate`].
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError>;
}

struct Complete;
struct Cycle;
struct Hypercube;
struct Hamming;
struct Kneser;
struct Odd;

static REGISTRY: [&dyn GraphFamily; 6] = [&Complete, &Cycle, &Hypercube, &Hamming, &Kneser, &Odd];

/// All registered families.
pub fn registry() -> &'static [&'static dyn GraphFamily] {
    &REGISTRY
}

/// Looks a family up by name.
pub fn find(name: &str) -> Option<&'static dyn GraphFamily> {
    REGISTRY.iter().copied().find(|f| f.name() == name)
}

fn available_names() -> String {
    REGISTRY
        .iter()
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Generates a family member, checking the parameter count.
pub fn generate(name: &str, params: &[u64]) -> Result<Graph, FamilyError> {
    let family = find(name).ok_or_else(|| FamilyError::UnknownFamily {
        name: name.to_string(),
        available: available_names(),
    })?;
    if params.len() != family.arity() {
        return Err(FamilyError::WrongArity {
            family: family.name(),
            expected: family.arity(),
            got: params.len(),
        });
    }
    family.build(params)
}

/// Parses a `NAME:ARG,ARG…` spec string and generates the graph.
pub fn generate_spec(spec: &str) -> Result<Graph, FamilyError> {
    let (name, args) = match spec.split_once(':') {
        Some((name, rest)) => {
            let args: Result<Vec<u64>, _> = rest.split(',').map(|a| a.trim().parse()).collect();
            match args {
                Ok(v) if !rest.trim().is_empty() => (name.trim(), v),
                _ => {
                    return Err(FamilyError::BadSpec {
                        spec: spec.to_string(),
                    })
                }
            }
        }
        None => (spec.trim(), Vec::new()),
    };
    generate(name, &args)
}

fn check_order(family: &'static str, n: u64) -> Result<usize, FamilyError> {
    if n > MAX_GENERATED_VERTICES {
        Err(FamilyError::TooLarge {
            family,
            n,
            max: MAX_GENERATED_VERTICES,
        })
    } else {
        Ok(n as usize)
    }
}

impl GraphFamily for Complete {
    fn name(&self) -> &'static str {
        "complete"
    }
    fn usage(&self) -> &'static str {
        "complete:n (n >= 1)"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        let n = params[0];
        if n < 1 {
            return Err(FamilyError::InvalidParameter {
                family: self.name(),
                reason: "n must be at least 1".into(),
            });
        }
        let n = check_order(self.name(), n)?;
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }
}

impl GraphFamily for Cycle {
    fn name(&self) -> &'static str {
        "cycle"
    }
    fn usage(&self) -> &'static str {
        "cycle:n (n >= 3)"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        let n = params[0];
        if n < 3 {
            return Err(FamilyError::InvalidParameter {
                family: self.name(),
                reason: "n must be at least 3".into(),
            });
        }
        let n = check_order(self.name(), n)?;
        Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))))
    }
}

fn hamming_graph(family: &'static str, d: u64, q: u64) -> Result<Graph, FamilyError> {
    if d < 1 {
        return Err(FamilyError::InvalidParameter {
            family,
            reason: "word length d must be at least 1".into(),
        });
    }
    if q < 2 {
        return Err(FamilyError::InvalidParameter {
            family,
            reason: "alphabet size q must be at least 2".into(),
        });
    }
    let n = q
        .checked_pow(d.try_into().map_err(|_| FamilyError::InvalidParameter {
            family,
            reason: "word length d is too large".into(),
        })?)
        .ok_or(FamilyError::TooLarge {
            family,
            n: u64::MAX,
            max: MAX_GENERATED_VERTICES,
        })?;
    let n = check_order(family, n)?;
    let d = d as usize;
    let q = q as usize;
    // Vertices are base-q words; neighbours differ in exactly one letter.
    let mut g = Graph::new(n);
    for u in 0..n {
        let mut place = 1usize;
        for _ in 0..d {
            let digit = u / place % q;
            let base = u - digit * place;
            for other in digit + 1..q {
                g.add_edge(u, base + other * place);
            }
            place *= q;
        }
    }
    Ok(g)
}

impl GraphFamily for Hypercube {
    fn name(&self) -> &'static str {
        "hypercube"
    }
    fn usage(&self) -> &'static str {
        "hypercube:m (m >= 1)"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        hamming_graph(self.name(), params[0], 2)
    }
}

impl GraphFamily for Hamming {
    fn name(&self) -> &'static str {
        "hamming"
    }
    fn usage(&self) -> &'static str {
        "hamming:d,q (d >= 1, q >= 2)"
    }
    fn arity(&self) -> usize {
        2
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        hamming_graph(self.name(), params[0], params[1])
    }
}

fn kneser_graph(family: &'static str, v: u64, t: u64) -> Result<Graph, FamilyError> {
    if t < 1 {
        return Err(FamilyError::InvalidParameter {
            family,
            reason: "subset size t must be at least 1".into(),
        });
    }
    if v < 2 * t {
        return Err(FamilyError::InvalidParameter {
            family,
            reason: format!("need v >= 2t for disjoint t-subsets to exist, got v={v}, t={t}"),
        });
    }
    if v > 63 {
        return Err(FamilyError::InvalidParameter {
            family,
            reason: "ground set size v must be at most 63".into(),
        });
    }
    let n = binomial(v, t).ok_or(FamilyError::TooLarge {
        family,
        n: u64::MAX,
        max: MAX_GENERATED_VERTICES,
    })?;
    let n = check_order(family, n)?;
    // Enumerate t-subsets of {0, …, v-1} as bitmasks in lexicographic order.
    let t_len = t as usize;
    let mut masks = Vec::with_capacity(n);
    let mut comb: Vec<u64> = (0..t).collect();
    loop {
        masks.push(comb.iter().fold(0u64, |m, &i| m | 1 << i));
        if !advance_combination(&mut comb, v, t_len) {
            break;
        }
    }
    debug_assert_eq!(masks.len(), n);
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if masks[a] & masks[b] == 0 {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// Steps `comb` to the next t-subset of `{0, …, v-1}` in lexicographic
/// order; returns false after the last one.
fn advance_combination(comb: &mut [u64], v: u64, t: usize) -> bool {
    let mut i = t;
    while i > 0 {
        i -= 1;
        if comb[i] < v - (t - i) as u64 {
            comb[i] += 1;
            for j in i + 1..t {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(v: u64, t: u64) -> Option<u64> {
    let t = t.min(v - t);
    let mut acc: u64 = 1;
    for i in 0..t {
        acc = acc.checked_mul(v - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

impl GraphFamily for Kneser {
    fn name(&self) -> &'static str {
        "kneser"
    }
    fn usage(&self) -> &'static str {
        "kneser:v,t (v >= 2t, t >= 1)"
    }
    fn arity(&self) -> usize {
        2
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        kneser_graph(self.name(), params[0], params[1])
    }
}

impl GraphFamily for Odd {
    fn name(&self) -> &'static str {
        "odd"
    }
    fn usage(&self) -> &'static str {
        "odd:m (m >= 2); the Kneser graph K(2m-1, m-1)"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, params: &[u64]) -> Result<Graph, FamilyError> {
        let m = params[0];
        if m < 2 {
            return Err(FamilyError::InvalidParameter {
                family: self.name(),
                reason: "m must be at least 2".into(),
            });
        }
        kneser_graph(self.name(), 2 * m - 1, m - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::regular_degree;

    #[test]
    fn registry_names_are_unique_and_resolvable() {
        let mut names: Vec<_> = registry().iter().map(|f| f.name()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), registry().len());
        for f in registry() {
            assert!(find(f.name()).is_some());
            assert!(f.usage().starts_with(f.name()));
        }
    }

    #[test]
    fn odd_four_is_the_35_vertex_4_regular_kneser_graph() {
        let g = generate_spec("odd:4").unwrap();
        assert_eq!(g.n(), 35);
        assert_eq!(regular_degree(&g).unwrap(), 4);
        assert_eq!(g, generate_spec("kneser:7,3").unwrap());
    }

    #[test]
    fn odd_three_is_the_petersen_graph() {
        let g = generate_spec("odd:3").unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(regular_degree(&g).unwrap(), 3);
        assert_eq!(g, generate_spec("kneser:5,2").unwrap());
        // Petersen: girth 5, so no common neighbour for adjacent vertices
        // and exactly one for non-adjacent ones.
        for u in 0..10 {
            for v in 0..u {
                let expect = if g.has_edge(u, v) { 0 } else { 1 };
                assert_eq!(g.common_neighbors(u, v), expect);
            }
        }
    }

    #[test]
    fn hamming_4_3_shape() {
        let g = generate_spec("hamming:4,3").unwrap();
        assert_eq!(g.n(), 81);
        assert_eq!(regular_degree(&g).unwrap(), 8);
    }

    #[test]
    fn hypercube_matches_hamming_base_two() {
        assert_eq!(
            generate_spec("hypercube:3").unwrap(),
            generate_spec("hamming:3,2").unwrap()
        );
        let q4 = generate_spec("hypercube:4").unwrap();
        assert_eq!(q4.n(), 16);
        assert_eq!(regular_degree(&q4).unwrap(), 4);
    }

    #[test]
    fn cycles_and_complete_graphs() {
        let c5 = generate_spec("cycle:5").unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(regular_degree(&c5).unwrap(), 2);
        let k6 = generate_spec("complete:6").unwrap();
        assert_eq!(k6.edge_count(), 15);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            generate_spec("kneser:3,2").unwrap_err(),
            FamilyError::InvalidParameter {
                family: "kneser",
                ..
            }
        ));
        assert!(matches!(
            generate_spec("cycle:2").unwrap_err(),
            FamilyError::InvalidParameter {
                family: "cycle",
                ..
            }
        ));
        assert!(matches!(
            generate_spec("odd:1").unwrap_err(),
            FamilyError::InvalidParameter { family: "odd", .. }
        ));
        assert!(matches!(
            generate_spec("cycle:3,4").unwrap_err(),
            FamilyError::WrongArity {
                family: "cycle",
                expected: 1,
                got: 2
            }
        ));
        assert!(matches!(
            generate_spec("moebius:5").unwrap_err(),
            FamilyError::UnknownFamily { .. }
        ));
        assert!(matches!(
            generate_spec("cycle:").unwrap_err(),
            FamilyError::BadSpec { .. }
        ));
        assert!(matches!(
            generate_spec("hamming:20,3").unwrap_err(),
            FamilyError::TooLarge { .. }
        ));
    }
}
