//! Executable checks of the structural and extremal results on critical
//! covers: block classification of low-vertex subgraphs, the Brooks-type
//! bound, degree-choosability, and the edge bounds of Gallai, Dirac and
//! Mihók–Škrekovski. Every check returns a [`VerdictReport`].
//!
//! Bounds are evaluated in exact rationals.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::chromatic::{chi_dp, chi_dp_decide, chi_with, is_dp_critical, ChromaticError, CoverDecision, Limits};
use crate::cover::{find_p_transversal, is_p_critical_cover, low_vertex_subgraph, Cover, Transversal};
use crate::graph::graph6::to_graph6;
use crate::graph::{block_decomposition, Graph};
use crate::property::{PropertyError, PropertyOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("the cover is not critical for this property")]
    NotCritical,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("bad split: {0}")]
    BadSplit(String),
    #[error(transparent)]
    Chromatic(#[from] ChromaticError),
    #[error(transparent)]
    Property(#[from] PropertyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    LowVertexBlocks,
    Brooks,
    DegreeChoosable,
    Gallai,
    Dirac,
    Mihok,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionClass {
    CompleteGraph,
    RRegularCR,
    Cycle,
}

/// The four block types allowed in a low-vertex subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockClass {
    Complete,
    Cycle,
    /// `B` is `r`-regular and in `CR(P)`.
    RegularCritical,
    /// `B` is in `P` and `Δ(B) <= r`.
    SparseMember,
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockVerdict {
    /// Vertices of the block, as vertices of the input graph.
    pub vertices: Vec<usize>,
    pub class: BlockClass,
}

/// Bound against observed value, both printed exactly (`a` or `a/b`).
/// `observed` may be a one-sided statement such as `<= 3` when only that
/// much was decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Numbers {
    pub bound: String,
    pub observed: String,
    /// Observed equals the bound (edge bounds only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "data")]
pub enum VerdictWitness {
    None,
    Blocks(Vec<BlockVerdict>),
    /// A cover without a good transversal.
    BadCover(Cover),
    Transversal(Transversal),
    Dirac(DiracGraph),
    Exempt(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub theorem_id: TheoremId,
    pub inputs_digest: String,
    pub holds: bool,
    pub exception_class: Option<ExceptionClass>,
    pub numbers: Option<Numbers>,
    pub witness: VerdictWitness,
}

fn digest(g: &Graph, p: &PropertyOracle, extra: &str) -> String {
    let mut s = format!("graph6={} property={}", to_graph6(g), p.name());
    if !extra.is_empty() {
        s.push(' ');
        s.push_str(extra);
    }
    s
}

fn show(q: Ratio<i64>) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Places the block induced by `vertices` of `g` in the four-way
/// classification (first matching class wins).
pub fn classify(g: &Graph, vertices: &[usize], p: &PropertyOracle, r: usize) -> BlockClass {
    let b = g.induced(vertices);
    if b.is_complete() {
        BlockClass::Complete
    } else if b.is_cycle() {
        BlockClass::Cycle
    } else if b.regular_degree() == Some(r) && p.is_cr(&b) {
        BlockClass::RegularCritical
    } else if b.max_degree() <= r && p.is_member(&b) {
        BlockClass::SparseMember
    } else {
        BlockClass::Unclassified
    }
}

fn classify_blocks(g: &Graph, ids: &[usize], p: &PropertyOracle, r: usize) -> Vec<BlockVerdict> {
    block_decomposition(g)
        .blocks
        .iter()
        .map(|block| BlockVerdict {
            vertices: block.iter().map(|&i| ids[i]).collect(),
            class: classify(g, block, p, r),
        })
        .collect()
}

/// Every block of the low-vertex subgraph of a `P`-critical cover is
/// complete, a cycle, `r`-regular and critical, or a member of `P` with
/// maximum degree at most `r`. Also checks `d_G(v) >= r |X_v|` everywhere.
pub fn verify_low_vertex_blocks(c: &Cover, p: &PropertyOracle) -> Result<VerdictReport, TheoremError> {
    if !is_p_critical_cover(c, p) {
        return Err(TheoremError::NotCritical);
    }
    let r = p.r()?;
    let g = c.base();
    let degrees_ok = (0..g.order()).all(|v| g.degree(v) >= r * c.fiber_size(v));
    let low = low_vertex_subgraph(c, r);
    let blocks = classify_blocks(&low.graph, &low.low, p, r);
    let holds = degrees_ok && blocks.iter().all(|b| b.class != BlockClass::Unclassified);
    Ok(VerdictReport {
        theorem_id: TheoremId::LowVertexBlocks,
        inputs_digest: digest(g, p, &format!("fibers={:?} low={:?}", c.fibers(), low.low)),
        holds,
        exception_class: None,
        numbers: None,
        witness: VerdictWitness::Blocks(blocks),
    })
}

/// The exception classes `g` belongs to, in reporting order.
fn brooks_exception(g: &Graph, p: &PropertyOracle, r: usize) -> Option<ExceptionClass> {
    let n = g.order();
    if g.is_complete() && n >= 1 && (n - 1) % r == 0 {
        Some(ExceptionClass::CompleteGraph)
    } else if g.regular_degree() == Some(r) && p.is_cr(g) {
        Some(ExceptionClass::RRegularCR)
    } else if p.is_edgeless_class() && g.is_cycle() {
        Some(ExceptionClass::Cycle)
    } else {
        None
    }
}

/// `chi_DP(G:P) <= ceil(Δ/r)` for connected `g`, unless `g` is `K_{kr+1}`,
/// an `r`-regular member of `CR(P)`, or a cycle with `P = O`.
///
/// Only the decision at `k = ceil(Δ/r)` is needed. When it fails the value
/// is pinned down by deciding `k + 1` as well.
pub fn verify_brooks(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<VerdictReport, TheoremError> {
    if !g.is_connected() || g.order() == 0 {
        return Err(TheoremError::PreconditionFailed("graph must be connected and nonempty".into()));
    }
    let r = p.r()?;
    let bound = g.max_degree().div_ceil(r);
    let inputs_digest = digest(g, p, &format!("r={r}"));
    match chi_dp_decide(g, p, bound, limits)? {
        CoverDecision::AllCoverable => {
            let chi = chi_with(g, p, limits)?.value;
            let observed = if chi == bound {
                bound.to_string()
            } else {
                format!("<= {bound}")
            };
            Ok(VerdictReport {
                theorem_id: TheoremId::Brooks,
                inputs_digest,
                holds: true,
                exception_class: None,
                numbers: Some(Numbers {
                    bound: bound.to_string(),
                    observed,
                    equality: None,
                }),
                witness: VerdictWitness::None,
            })
        }
        CoverDecision::BadCover(bad) => {
            let observed = match chi_dp_decide(g, p, bound + 1, limits)? {
                CoverDecision::AllCoverable => (bound + 1).to_string(),
                CoverDecision::BadCover(_) => chi_dp(g, p, limits)?.value.to_string(),
            };
            let exception_class = brooks_exception(g, p, r);
            Ok(VerdictReport {
                theorem_id: TheoremId::Brooks,
                inputs_digest,
                holds: exception_class.is_some(),
                exception_class,
                numbers: Some(Numbers {
                    bound: bound.to_string(),
                    observed,
                    equality: None,
                }),
                witness: VerdictWitness::BadCover(bad),
            })
        }
    }
}

/// If `c` satisfies `r |X_v| >= d_G(v)` and has no `P`-transversal, every
/// block of the connected graph `g` falls in the four-way classification.
/// A colourable cover holds vacuously and reports its transversal.
pub fn verify_ert(g: &Graph, c: &Cover, p: &PropertyOracle) -> Result<VerdictReport, TheoremError> {
    if c.base() != g {
        return Err(TheoremError::PreconditionFailed("cover is over a different graph".into()));
    }
    if !g.is_connected() {
        return Err(TheoremError::PreconditionFailed("graph must be connected".into()));
    }
    let r = p.r()?;
    if let Some(v) = (0..g.order()).find(|&v| r * c.fiber_size(v) < g.degree(v)) {
        return Err(TheoremError::PreconditionFailed(format!(
            "vertex {v}: r * |X_v| = {} < degree {}",
            r * c.fiber_size(v),
            g.degree(v)
        )));
    }
    let inputs_digest = digest(g, p, &format!("fibers={:?}", c.fibers()));
    if let Some(t) = find_p_transversal(c, p) {
        return Ok(VerdictReport {
            theorem_id: TheoremId::DegreeChoosable,
            inputs_digest,
            holds: true,
            exception_class: None,
            numbers: None,
            witness: VerdictWitness::Transversal(t),
        });
    }
    let ids: Vec<usize> = (0..g.order()).collect();
    let blocks = classify_blocks(g, &ids, p, r);
    let holds = blocks.iter().all(|b| b.class != BlockClass::Unclassified);
    Ok(VerdictReport {
        theorem_id: TheoremId::DegreeChoosable,
        inputs_digest,
        holds,
        exception_class: None,
        numbers: None,
        witness: VerdictWitness::Blocks(blocks),
    })
}

/// Which edge bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    /// `2|E| >= (kr + (kr-2)/((kr+1)^2-3)) |G| + 2kr/((kr+1)^2-3)` unless
    /// `G = K_{kr+1}`.
    Gallai,
    /// `2|E| >= k|G| + k - 2` for `P = O` and `G` without `K_{k+1}`, with
    /// equality exactly on `Dir(k)`.
    Dirac,
    /// `(p - 1 + 2/p)|F| - 2|E(F)| >= 2` for `F` with `Δ(F) <= p` and
    /// `Δ(B) < p` for every block; `k` plays the role of `p`.
    Mihok,
}

/// What certifies that `g` is critical in Gallai and Dirac mode.
#[derive(Clone, Copy, Debug)]
pub enum Criticality<'a> {
    /// A `P`-critical `k`-cover of `g`; checked.
    Cover(&'a Cover),
    /// `g` is `(P, chi_DP)`-critical with `chi_DP = k + 1`; checked by search.
    DpCritical,
}

/// Gallai bound coefficients `(R, R')` for `p = kr`.
pub fn gallai_coefficients(kr: i64) -> (Ratio<i64>, Ratio<i64>) {
    let den = (kr + 1) * (kr + 1) - 3;
    (
        Ratio::from_integer(kr) + Ratio::new(kr - 2, den),
        Ratio::new(2 * kr, den),
    )
}

/// Evaluates one of the edge bounds on `g`, after checking its
/// precondition.
pub fn check_edge_bounds(
    g: &Graph,
    p: &PropertyOracle,
    k: usize,
    mode: BoundMode,
    context: Criticality<'_>,
    limits: &Limits,
) -> Result<VerdictReport, TheoremError> {
    let n = g.order() as i64;
    let two_e = Ratio::from_integer(2 * g.size() as i64);
    let ki = k as i64;
    match mode {
        BoundMode::Mihok => {
            if k == 0 || g.order() == 0 {
                return Err(TheoremError::PreconditionFailed("need p >= 1 and a nonempty graph".into()));
            }
            if g.max_degree() > k {
                return Err(TheoremError::PreconditionFailed(format!("Δ(F) = {} > p = {k}", g.max_degree())));
            }
            for block in block_decomposition(g).blocks {
                let d = g.induced(&block).max_degree();
                if d >= k {
                    return Err(TheoremError::PreconditionFailed(format!("block {block:?} has Δ = {d} >= p = {k}")));
                }
            }
            let coeff = Ratio::from_integer(ki - 1) + Ratio::new(2, ki);
            let lhs = coeff * Ratio::from_integer(n) - two_e;
            let bound = Ratio::from_integer(2);
            Ok(VerdictReport {
                theorem_id: TheoremId::Mihok,
                inputs_digest: digest(g, p, &format!("p={k}")),
                holds: lhs >= bound,
                exception_class: None,
                numbers: Some(Numbers {
                    bound: show(bound),
                    observed: show(lhs),
                    equality: Some(lhs == bound),
                }),
                witness: VerdictWitness::None,
            })
        }
        BoundMode::Gallai | BoundMode::Dirac => {
            if k < 3 {
                return Err(TheoremError::PreconditionFailed(format!("k = {k} < 3")));
            }
            if mode == BoundMode::Dirac && !p.is_edgeless_class() {
                return Err(TheoremError::PreconditionFailed("the Dirac bound is for O only".into()));
            }
            let r = p.r()?;
            check_critical(g, p, k, context, limits)?;
            let (bound, exempt) = if mode == BoundMode::Gallai {
                let (a, b) = gallai_coefficients(ki * r as i64);
                let exempt = g.is_complete() && g.order() == k * r + 1;
                (a * Ratio::from_integer(n) + b, exempt.then(|| format!("K_{}", k * r + 1)))
            } else {
                let exempt = contains_clique(g, k + 1);
                (Ratio::from_integer(ki * n + ki - 2), exempt.then(|| format!("contains K_{}", k + 1)))
            };
            let equality = two_e == bound;
            let extra = format!("k={k} r={r}");
            let theorem_id = if mode == BoundMode::Gallai {
                TheoremId::Gallai
            } else {
                TheoremId::Dirac
            };
            let numbers = Some(Numbers {
                bound: show(bound),
                observed: show(two_e),
                equality: Some(equality),
            });
            if let Some(why) = exempt {
                return Ok(VerdictReport {
                    theorem_id,
                    inputs_digest: digest(g, p, &extra),
                    holds: true,
                    exception_class: Some(ExceptionClass::CompleteGraph),
                    numbers,
                    witness: VerdictWitness::Exempt(why),
                });
            }
            let mut holds = two_e >= bound;
            let mut witness = VerdictWitness::None;
            if mode == BoundMode::Dirac {
                let family = recognize_dirac(g, k);
                // equality exactly on the extremal family
                holds &= equality == family.is_some();
                if let Some(d) = family {
                    witness = VerdictWitness::Dirac(d);
                }
            }
            Ok(VerdictReport {
                theorem_id,
                inputs_digest: digest(g, p, &extra),
                holds,
                exception_class: None,
                numbers,
                witness,
            })
        }
    }
}

fn check_critical(g: &Graph, p: &PropertyOracle, k: usize, context: Criticality<'_>, limits: &Limits) -> Result<(), TheoremError> {
    match context {
        Criticality::Cover(c) => {
            if c.base() != g {
                return Err(TheoremError::PreconditionFailed("cover is over a different graph".into()));
            }
            if c.min_fiber() < k {
                return Err(TheoremError::PreconditionFailed(format!("not a {k}-cover")));
            }
            if !is_p_critical_cover(c, p) {
                return Err(TheoremError::PreconditionFailed("cover is not critical".into()));
            }
        }
        Criticality::DpCritical => {
            let value = chi_dp(g, p, limits)?.value;
            if value != k + 1 || !is_dp_critical(g, p, limits)? {
                return Err(TheoremError::PreconditionFailed(format!(
                    "graph is not (P, chi_DP)-critical with chi_DP = {}",
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

fn contains_clique(g: &Graph, size: usize) -> bool {
    fn grow(g: &Graph, clique: &mut Vec<usize>, from: usize, size: usize) -> bool {
        if clique.len() == size {
            return true;
        }
        for v in from..g.order() {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
                if grow(g, clique, v + 1, size) {
                    return true;
                }
                clique.pop();
            }
        }
        false
    }
    grow(g, &mut Vec::new(), 0, size)
}

/// A member of `Dir(k)`: cliques `A` and `B1 ∪ B2` with no edges between
/// them, and `v_i` adjacent to exactly `A ∪ B_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiracGraph {
    pub k: usize,
    pub a: Vec<usize>,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub v1: usize,
    pub v2: usize,
    pub graph: Graph,
}

/// Builds the `Dir(k)` graph with `|B1|, |B2| = split`. Vertices are
/// numbered `A`, `B1`, `B2`, `v1`, `v2`.
pub fn gen_dirac(k: usize, split: (usize, usize)) -> Result<DiracGraph, TheoremError> {
    let (s1, s2) = split;
    if k < 3 {
        return Err(TheoremError::BadSplit(format!("k = {k} < 3")));
    }
    if s1 == 0 || s2 == 0 || s1 + s2 != k {
        return Err(TheoremError::BadSplit(format!("need |B1| + |B2| = {k} with both >= 1, got ({s1}, {s2})")));
    }
    let a: Vec<usize> = (0..k - 1).collect();
    let b1: Vec<usize> = (k - 1..k - 1 + s1).collect();
    let b2: Vec<usize> = (k - 1 + s1..2 * k - 1).collect();
    let (v1, v2) = (2 * k - 1, 2 * k);
    let mut edges = Vec::new();
    let clique = |set: &[usize], edges: &mut Vec<(usize, usize)>| {
        for (i, &u) in set.iter().enumerate() {
            for &w in &set[i + 1..] {
                edges.push((u, w));
            }
        }
    };
    clique(&a, &mut edges);
    let b: Vec<usize> = b1.iter().chain(&b2).copied().collect();
    clique(&b, &mut edges);
    for (v, bi) in [(v1, &b1), (v2, &b2)] {
        edges.extend(a.iter().chain(bi.iter()).map(|&u| (u, v)));
    }
    let graph = Graph::from_edges(2 * k + 1, &edges).expect("construction is simple");
    Ok(DiracGraph { k, a, b1, b2, v1, v2, graph })
}

/// Finds a `Dir(k)` structure on `g`. In such a graph `v1, v2` are
/// non-adjacent, `A` is their common neighbourhood and `B_i` the rest of
/// `N(v_i)`, so trying every non-adjacent pair decides membership.
pub fn recognize_dirac(g: &Graph, k: usize) -> Option<DiracGraph> {
    let n = g.order();
    if k < 3 || n != 2 * k + 1 {
        return None;
    }
    for v1 in 0..n {
        for v2 in v1 + 1..n {
            if g.has_edge(v1, v2) {
                continue;
            }
            let a: Vec<usize> = g.neighbors(v1).iter().copied().filter(|&u| g.has_edge(u, v2)).collect();
            let b1: Vec<usize> = g.neighbors(v1).iter().copied().filter(|&u| !g.has_edge(u, v2)).collect();
            let b2: Vec<usize> = g.neighbors(v2).iter().copied().filter(|&u| !g.has_edge(u, v1)).collect();
            if a.len() + 1 != k || b1.is_empty() || b2.is_empty() || b1.len() + b2.len() != k {
                continue;
            }
            let b: Vec<usize> = b1.iter().chain(&b2).copied().collect();
            let is_clique = |s: &[usize]| s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&w| g.has_edge(u, w)));
            let apart = a.iter().all(|&u| b.iter().all(|&w| !g.has_edge(u, w)));
            if is_clique(&a) && is_clique(&b) && apart {
                return Some(DiracGraph {
                    k,
                    a,
                    b1,
                    b2,
                    v1,
                    v2,
                    graph: g.clone(),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::chi;
    use crate::cover::cover_from_lists;

    fn o() -> PropertyOracle {
        PropertyOracle::edgeless()
    }

    #[test]
    fn dirac_three_has_eleven_edges() {
        let d = gen_dirac(3, (1, 2)).unwrap();
        assert_eq!(d.graph.order(), 7);
        assert_eq!(d.graph.size(), 11);
        assert_eq!(chi(&d.graph, &o()).unwrap().value, 4);
        for v in 0..7 {
            assert_eq!(chi(&d.graph.remove_vertex(v), &o()).unwrap().value, 3);
        }
        assert!(recognize_dirac(&d.graph, 3).is_some());
        assert!(matches!(gen_dirac(3, (0, 3)), Err(TheoremError::BadSplit(_))));
        assert!(matches!(gen_dirac(3, (2, 2)), Err(TheoremError::BadSplit(_))));
    }

    #[test]
    fn edge_count_formula_over_splits() {
        for k in 3..=6 {
            for s1 in 1..k {
                let d = gen_dirac(k, (s1, k - s1)).unwrap();
                assert_eq!(d.graph.size(), k * k + k - 1);
                assert_eq!(2 * d.graph.size(), k * d.graph.order() + k - 2);
                let found = recognize_dirac(&d.graph, k).unwrap();
                assert_eq!(found.a.len(), k - 1);
                assert_eq!(found.b1.len() + found.b2.len(), k);
            }
        }
    }

    #[test]
    fn gallai_value_for_seven_vertices() {
        let (a, b) = gallai_coefficients(3);
        assert_eq!(a * Ratio::from_integer(7) + b, Ratio::new(286, 13));
    }

    #[test]
    fn mihok_on_path() {
        let r = check_edge_bounds(&Graph::path(3), &o(), 2, BoundMode::Mihok, Criticality::DpCritical, &Limits::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.numbers.unwrap().observed, "2");
    }

    #[test]
    fn brooks_exceptions() {
        let lim = Limits::default();
        let r = verify_brooks(&Graph::cycle(5), &o(), &lim).unwrap();
        assert_eq!(r.exception_class, Some(ExceptionClass::Cycle));
        assert!(r.holds);
        let r = verify_brooks(&Graph::complete(4), &o(), &lim).unwrap();
        assert_eq!(r.exception_class, Some(ExceptionClass::CompleteGraph));
        let r = verify_brooks(&Graph::cycle(5), &PropertyOracle::degenerate(1), &lim).unwrap();
        assert_eq!(r.exception_class, Some(ExceptionClass::RRegularCR));
        let r = verify_brooks(&Graph::path(4), &o(), &lim).unwrap();
        assert!(r.holds && r.exception_class.is_none());
    }

    #[test]
    fn ert_examples() {
        let c3 = Cover::identity(&Graph::cycle(3), 2);
        let r = verify_ert(c3.base(), &c3, &o()).unwrap();
        assert!(r.holds);
        let k4 = Cover::identity(&Graph::complete(4), 2);
        assert!(matches!(verify_ert(k4.base(), &k4, &o()), Err(TheoremError::PreconditionFailed(_))));
    }

    #[test]
    fn two_cliques_with_bridge() {
        let k4 = Graph::complete(4);
        let g = k4.disjoint_union(&k4).with_edges(&[(0, 4)]).unwrap();
        let mut lists = vec![vec![1, 2, 3]; 8];
        lists[0] = vec![2, 3, 4];
        lists[4] = vec![2, 3, 4];
        let c = cover_from_lists(&g, &lists);
        assert!(is_p_critical_cover(&c, &o()));
        let r = check_edge_bounds(&g, &o(), 3, BoundMode::Dirac, Criticality::Cover(&c), &Limits::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.numbers.as_ref().unwrap().equality, Some(false));
    }
}
