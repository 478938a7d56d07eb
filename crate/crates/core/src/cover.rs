//! Covers `(X, H)` of a graph and their transversals.
//!
//! `H` is never stored as a flat graph. A cover is the base graph, one fiber
//! size per base vertex, and for every base edge `uv` (with `u < v`) a list
//! of pairs `(i, j)` joining the `i`-th vertex of `X_u` to the `j`-th vertex
//! of `X_v`. Vertex `(v, i)` of `H` has the flat id `offset(v) + i`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::property::PropertyOracle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("invalid cover on edge {u}-{v}: {reason}")]
    InvalidMatching { u: usize, v: usize, reason: String },
    #[error("matching given for {u}-{v}, which is not an edge of the base graph")]
    NotAnEdge { u: usize, v: usize },
    #[error("expected {expected} fiber sizes, found {found}")]
    FiberCount { expected: usize, found: usize },
    #[error("bad matching key {0:?} (expected \"u-v\")")]
    BadKey(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

const NO_MATE: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq)]
pub struct Cover {
    base: Graph,
    fibers: Vec<usize>,
    matchings: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    offsets: Vec<usize>,
    // mates[v][k][i]: index in X_w matched to (v, i), where w = neighbors(v)[k]
    mates: Vec<Vec<Vec<u32>>>,
}

impl std::fmt::Debug for Cover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cover")
            .field("base", &self.base)
            .field("fibers", &self.fibers)
            .field("matchings", &self.matchings)
            .finish()
    }
}

impl Cover {
    /// Builds and validates a cover. Matchings may be keyed `(u, v)` in
    /// either orientation; missing edges carry the empty matching.
    pub fn new(
        base: Graph,
        fibers: Vec<usize>,
        matchings: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    ) -> Result<Self, CoverError> {
        let c = Cover::new_unchecked(base, fibers, matchings)?;
        c.validate()?;
        Ok(c)
    }

    /// Builds a cover without checking the matching condition. Searches on
    /// an invalid cover give meaningless answers; call [`Cover::validate`].
    pub fn new_unchecked(
        base: Graph,
        fibers: Vec<usize>,
        matchings: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    ) -> Result<Self, CoverError> {
        if fibers.len() != base.order() {
            return Err(CoverError::FiberCount {
                expected: base.order(),
                found: fibers.len(),
            });
        }
        let mut norm = BTreeMap::new();
        for ((u, v), pairs) in matchings {
            if !base.has_edge(u, v) {
                return Err(CoverError::NotAnEdge { u, v });
            }
            let (key, mut pairs) = if u < v {
                ((u, v), pairs)
            } else {
                ((v, u), pairs.into_iter().map(|(i, j)| (j, i)).collect())
            };
            let entry: &mut Vec<(usize, usize)> = norm.entry(key).or_default();
            entry.append(&mut pairs);
        }
        for pairs in norm.values_mut() {
            pairs.sort_unstable();
        }
        norm.retain(|_, p: &mut Vec<(usize, usize)>| !p.is_empty());
        let mut offsets = Vec::with_capacity(fibers.len());
        let mut acc = 0;
        for &s in &fibers {
            offsets.push(acc);
            acc += s;
        }
        let mut mates: Vec<Vec<Vec<u32>>> = (0..base.order())
            .map(|v| vec![vec![NO_MATE; fibers[v]]; base.degree(v)])
            .collect();
        for (&(u, v), pairs) in &norm {
            let ku = base.neighbors(u).binary_search(&v).unwrap();
            let kv = base.neighbors(v).binary_search(&u).unwrap();
            for &(i, j) in pairs {
                if i < fibers[u] && j < fibers[v] {
                    mates[u][ku][i] = j as u32;
                    mates[v][kv][j] = i as u32;
                }
            }
        }
        Ok(Cover {
            base,
            fibers,
            matchings: norm,
            offsets,
            mates,
        })
    }

    /// Checks that every edge carries a matching with in-range indices.
    pub fn validate(&self) -> Result<(), CoverError> {
        for (&(u, v), pairs) in &self.matchings {
            let bad = |reason: String| Err(CoverError::InvalidMatching { u, v, reason });
            let mut firsts = BTreeSet::new();
            let mut seconds = BTreeSet::new();
            for &(i, j) in pairs {
                if i >= self.fibers[u] || j >= self.fibers[v] {
                    return bad(format!("pair ({i},{j}) outside fibers of sizes {} and {}", self.fibers[u], self.fibers[v]));
                }
                if !firsts.insert(i) {
                    return bad(format!("index {i} of X_{u} matched twice"));
                }
                if !seconds.insert(j) {
                    return bad(format!("index {j} of X_{v} matched twice"));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The cover in which every vertex has fiber size `k` and every edge
    /// carries the identity matching (the cover of the constant list `[0, k)`).
    pub fn identity(g: &Graph, k: usize) -> Cover {
        let m = g.edges().map(|e| (e, (0..k).map(|i| (i, i)).collect())).collect();
        Cover::new(g.clone(), vec![k; g.order()], m).expect("identity cover is valid")
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn fiber_size(&self, v: usize) -> usize {
        self.fibers[v]
    }

    pub fn min_fiber(&self) -> usize {
        self.fibers.iter().copied().min().unwrap_or(0)
    }

    pub fn max_fiber(&self) -> usize {
        self.fibers.iter().copied().max().unwrap_or(0)
    }

    /// The matching on edge `uv`, oriented from `u` to `v`.
    pub fn matching(&self, u: usize, v: usize) -> Vec<(usize, usize)> {
        if u < v {
            self.matchings.get(&(u, v)).cloned().unwrap_or_default()
        } else {
            self.matchings
                .get(&(v, u))
                .map(|p| p.iter().map(|&(i, j)| (j, i)).collect())
                .unwrap_or_default()
        }
    }

    pub fn matchings(&self) -> &BTreeMap<(usize, usize), Vec<(usize, usize)>> {
        &self.matchings
    }

    /// Number of vertices of `H`.
    pub fn h_order(&self) -> usize {
        self.fibers.iter().sum()
    }

    pub fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Flat id of `(v, i)`.
    pub fn h_id(&self, v: usize, i: usize) -> usize {
        self.offsets[v] + i
    }

    /// Inverse of [`Cover::h_id`].
    pub fn h_addr(&self, id: usize) -> (usize, usize) {
        let v = self.offsets.partition_point(|&o| o <= id) - 1;
        // skip empty fibers that share the offset
        let v = (v..self.fibers.len())
            .find(|&w| id < self.offsets[w] + self.fibers[w])
            .unwrap_or(v);
        (v, id - self.offsets[v])
    }

    /// Index in `X_w` matched to `(v, i)`, where `w = base.neighbors(v)[k]`.
    #[inline]
    pub fn mate_at(&self, v: usize, k: usize, i: usize) -> Option<usize> {
        let m = self.mates[v][k][i];
        (m != NO_MATE).then_some(m as usize)
    }

    pub fn mate(&self, v: usize, i: usize, w: usize) -> Option<usize> {
        let k = self.base.neighbors(v).binary_search(&w).ok()?;
        self.mate_at(v, k, i)
    }

    /// `H`-neighbours of `(v, i)` as `(w, j)` addresses.
    pub fn h_neighbors(&self, v: usize, i: usize) -> Vec<(usize, usize)> {
        self.base
            .neighbors(v)
            .iter()
            .enumerate()
            .filter_map(|(k, &w)| self.mate_at(v, k, i).map(|j| (w, j)))
            .collect()
    }

    /// `H` as a flat graph on ids `0..h_order()`.
    pub fn h_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .matchings
            .iter()
            .flat_map(|(&(u, v), p)| p.iter().map(move |&(i, j)| (u, i, v, j)))
            .map(|(u, i, v, j)| (self.h_id(u, i), self.h_id(v, j)))
            .collect();
        Graph::from_edges(self.h_order(), &edges).expect("cover H is simple")
    }

    /// The cover induced on `vertices`; vertex `i` of the new base is
    /// `vertices[i]`.
    pub fn restrict(&self, vertices: &[usize]) -> Cover {
        let base = self.base.induced(vertices);
        let fibers = vertices.iter().map(|&v| self.fibers[v]).collect();
        let matchings = base
            .edges()
            .map(|(a, b)| ((a, b), self.matching(vertices[a], vertices[b])))
            .collect();
        Cover::new_unchecked(base, fibers, matchings).expect("restriction of a cover")
    }

    /// Pads every fiber to `s` with isolated vertices.
    pub fn padded(&self, s: usize) -> Cover {
        let fibers = self.fibers.iter().map(|&f| f.max(s)).collect();
        Cover::new_unchecked(self.base.clone(), fibers, self.matchings.clone())
            .expect("padding keeps the cover valid")
    }

    /// Adjacency masks of `H[T]` over base vertices, for a (partial)
    /// transversal given per base vertex.
    pub fn induced_masks(&self, choice: &[Option<usize>]) -> Vec<u64> {
        let n = self.base.order();
        let mut adj = vec![0u64; n];
        for v in 0..n {
            let Some(i) = choice[v] else { continue };
            for (k, &w) in self.base.neighbors(v).iter().enumerate() {
                if let Some(j) = choice[w] {
                    if self.mate_at(v, k, i) == Some(j) {
                        adj[v] |= 1 << w;
                    }
                }
            }
        }
        adj
    }

    /// `H[T]` as a graph on the chosen base vertices, in increasing order.
    pub fn induced_graph(&self, choice: &[Option<usize>]) -> Graph {
        let adj = self.induced_masks(choice);
        let set = choice
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .fold(0u64, |m, (v, _)| m | 1 << v);
        crate::property::masked_graph(&adj, set)
    }
}

/// A choice of exactly one vertex from every fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transversal {
    pub choice: Vec<usize>,
}

/// A choice of at most one vertex from every fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialTransversal {
    pub choice: Vec<Option<usize>>,
}

impl PartialTransversal {
    /// Base vertices with a chosen fiber vertex.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.choice.len()).filter(|&v| self.choice[v].is_some()).collect()
    }

    pub fn to_total(&self) -> Option<Transversal> {
        self.choice
            .iter()
            .copied()
            .collect::<Option<Vec<_>>>()
            .map(|choice| Transversal { choice })
    }
}

impl From<Transversal> for PartialTransversal {
    fn from(t: Transversal) -> Self {
        PartialTransversal {
            choice: t.choice.into_iter().map(Some).collect(),
        }
    }
}

/// Depth-first search over fiber choices.
///
/// Base vertices are visited by descending degree (ties to the lower
/// index) and fiber indices in increasing order, so the first hit is the
/// lexicographically least acceptable choice in that visiting order.
/// `accept` sees the adjacency masks of `H[T]` over base vertices and the
/// chosen set; it is called after every extension when `prune` is set and
/// only on complete choices otherwise.
pub(crate) struct FiberSearch<'a> {
    cover: &'a Cover,
    order: Vec<usize>,
    adj: Vec<u64>,
    choice: Vec<Option<usize>>,
}

impl<'a> FiberSearch<'a> {
    pub(crate) fn new(cover: &'a Cover, skip: Option<usize>) -> Self {
        let g = cover.base();
        assert!(g.order() <= 64, "transversal search supports at most 64 base vertices");
        let mut order: Vec<usize> = (0..g.order()).filter(|&v| Some(v) != skip).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        FiberSearch {
            cover,
            order,
            adj: vec![0; g.order()],
            choice: vec![None; g.order()],
        }
    }

    /// Like [`FiberSearch::run`] with pruning on, giving `accept` the
    /// current choice as well.
    pub(crate) fn run_with_choice(
        self,
        allowed: impl Fn(usize, usize) -> bool,
        accept: impl Fn(&[u64], u64, &[Option<usize>]) -> bool,
    ) -> Option<PartialTransversal> {
        self.search(&allowed, &accept, true)
    }

    pub(crate) fn run(
        self,
        allowed: impl Fn(usize, usize) -> bool,
        accept: impl Fn(&[u64], u64) -> bool,
        prune: bool,
    ) -> Option<PartialTransversal> {
        self.search(&allowed, &|adj: &[u64], set, _: &[Option<usize>]| accept(adj, set), prune)
    }

    fn search(
        mut self,
        allowed: &impl Fn(usize, usize) -> bool,
        accept: &impl Fn(&[u64], u64, &[Option<usize>]) -> bool,
        prune: bool,
    ) -> Option<PartialTransversal> {
        if self.rec(0, 0, allowed, accept, prune) {
            Some(PartialTransversal { choice: self.choice })
        } else {
            None
        }
    }

    fn rec(
        &mut self,
        depth: usize,
        set: u64,
        allowed: &impl Fn(usize, usize) -> bool,
        accept: &impl Fn(&[u64], u64, &[Option<usize>]) -> bool,
        prune: bool,
    ) -> bool {
        if depth == self.order.len() {
            return prune || accept(&self.adj, set, &self.choice);
        }
        let v = self.order[depth];
        let cover = self.cover;
        let g = cover.base();
        for i in 0..cover.fiber_size(v) {
            if !allowed(v, i) {
                continue;
            }
            let mut mask = 0u64;
            for (k, &w) in g.neighbors(v).iter().enumerate() {
                if let Some(j) = self.choice[w] {
                    if cover.mate_at(v, k, i) == Some(j) {
                        mask |= 1 << w;
                    }
                }
            }
            self.choice[v] = Some(i);
            self.adj[v] = mask;
            let mut rest = mask;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.adj[w] |= 1 << v;
            }
            let next = set | 1 << v;
            let ok = !prune || accept(&self.adj, next, &self.choice);
            if ok && self.rec(depth + 1, next, allowed, accept, prune) {
                return true;
            }
            let mut rest = mask;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.adj[w] &= !(1 << v);
            }
            self.adj[v] = 0;
            self.choice[v] = None;
        }
        false
    }
}

/// Searches a `P`-transversal, or with `forbidden = Some(v)` a
/// `(P, v)`-transversal (a partial transversal whose domain is every vertex
/// except `v`). Pruning on partial choices is used only for properties
/// flagged hereditary.
pub fn find_p_transversal_with(
    c: &Cover,
    p: &PropertyOracle,
    forbidden: Option<usize>,
) -> Option<PartialTransversal> {
    FiberSearch::new(c, forbidden).run(
        |_, _| true,
        |adj, set| p.is_member_masked(adj, set),
        p.hereditary,
    )
}

pub fn find_p_transversal(c: &Cover, p: &PropertyOracle) -> Option<Transversal> {
    find_p_transversal_with(c, p, None).map(|t| t.to_total().expect("total transversal"))
}

pub fn find_p_v_transversal(c: &Cover, p: &PropertyOracle, v: usize) -> Option<PartialTransversal> {
    find_p_transversal_with(c, p, Some(v))
}

/// No `P`-transversal, but a `(P, v)`-transversal for every vertex `v`.
pub fn is_p_critical_cover(c: &Cover, p: &PropertyOracle) -> bool {
    find_p_transversal(c, p).is_none()
        && (0..c.base().order()).all(|v| find_p_v_transversal(c, p, v).is_some())
}

/// The cover associated with a list assignment: `X_v` indexes the sorted,
/// deduplicated `lists[v]`, and `(u, i) ~ (v, j)` when the colours agree.
pub fn cover_from_lists(g: &Graph, lists: &[Vec<u32>]) -> Cover {
    assert_eq!(lists.len(), g.order(), "one list per vertex");
    let lists: Vec<Vec<u32>> = lists
        .iter()
        .map(|l| {
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let matchings = g
        .edges()
        .map(|(u, v)| {
            let pairs = lists[u]
                .iter()
                .enumerate()
                .filter_map(|(i, c)| lists[v].binary_search(c).ok().map(|j| (i, j)))
                .collect();
            ((u, v), pairs)
        })
        .collect();
    Cover::new(g.clone(), lists.iter().map(Vec::len).collect(), matchings)
        .expect("list cover is valid")
}

/// The low vertices `{v : d_G(v) = r |X_v|}` and the subgraph they induce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowVertexSubgraph {
    pub low: Vec<usize>,
    pub graph: Graph,
}

pub fn low_vertex_subgraph(c: &Cover, r: usize) -> LowVertexSubgraph {
    let g = c.base();
    let low: Vec<usize> = (0..g.order())
        .filter(|&v| g.degree(v) == r * c.fiber_size(v))
        .collect();
    let graph = g.induced(&low);
    LowVertexSubgraph { low, graph }
}

/// `d_{x,v} = |N_H(x) ∩ T|` for every `x` in `X_v`.
pub fn fiber_degree_stats(c: &Cover, v: usize, t: &PartialTransversal) -> Vec<usize> {
    (0..c.fiber_size(v))
        .map(|i| {
            c.h_neighbors(v, i)
                .into_iter()
                .filter(|&(w, j)| t.choice[w] == Some(j))
                .count()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// JSON form: {"graph": [[u,v],...], "fibers": [...], "matchings": {"u-v": [[i,j],...]}}

#[derive(Serialize, Deserialize)]
pub(crate) struct CoverJson {
    pub graph: Vec<(usize, usize)>,
    pub fibers: Vec<usize>,
    #[serde(default)]
    pub matchings: BTreeMap<String, Vec<(usize, usize)>>,
}

pub(crate) fn parse_edge_key(key: &str) -> Result<(usize, usize), CoverError> {
    let (a, b) = key.split_once('-').ok_or_else(|| CoverError::BadKey(key.into()))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| CoverError::BadKey(key.into()));
    Ok((parse(a)?, parse(b)?))
}

impl TryFrom<CoverJson> for Cover {
    type Error = CoverError;

    fn try_from(j: CoverJson) -> Result<Self, Self::Error> {
        let base = Graph::from_edges(j.fibers.len(), &j.graph)?;
        let mut matchings = BTreeMap::new();
        for (key, pairs) in j.matchings {
            matchings.insert(parse_edge_key(&key)?, pairs);
        }
        Cover::new(base, j.fibers, matchings)
    }
}

impl From<&Cover> for CoverJson {
    fn from(c: &Cover) -> Self {
        CoverJson {
            graph: c.base.edges().collect(),
            fibers: c.fibers.clone(),
            matchings: c
                .matchings
                .iter()
                .map(|(&(u, v), p)| (format!("{u}-{v}"), p.clone()))
                .collect(),
        }
    }
}

/// Failure to read a cover or configuration from JSON.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonInputError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    /// Well-formed input describing an invalid cover.
    #[error(transparent)]
    Cover(CoverError),
    /// Well-formed input with a bad or missing `f` entry.
    #[error(transparent)]
    Config(crate::config::ConfigError),
}

impl From<serde_json::Error> for JsonInputError {
    fn from(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        // serde_json appends its own position; keep the bare message
        let msg = match msg.rfind(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        JsonInputError::Syntax {
            line: e.line(),
            column: e.column(),
            msg,
        }
    }
}

impl Cover {
    pub fn from_json(text: &str) -> Result<Cover, JsonInputError> {
        let j: CoverJson = serde_json::from_str(text)?;
        Cover::try_from(j).map_err(JsonInputError::Cover)
    }
}

impl Serialize for Cover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CoverJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CoverJson::deserialize(d)?;
        Cover::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2(pairs: &[(usize, usize)], s: usize) -> Cover {
        Cover::new_unchecked(
            Graph::complete(2),
            vec![s, s],
            BTreeMap::from([((0, 1), pairs.to_vec())]),
        )
        .unwrap()
    }

    pub(crate) fn twisted_c4() -> Cover {
        let mut m: BTreeMap<_, _> = Graph::cycle(4)
            .edges()
            .map(|e| (e, vec![(0, 0), (1, 1)]))
            .collect();
        m.insert((0, 3), vec![(0, 1), (1, 0)]);
        Cover::new(Graph::cycle(4), vec![2; 4], m).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(k2(&[(0, 0), (1, 1)], 2).validate().is_ok());
        let err = k2(&[(0, 0), (0, 1)], 2).validate().unwrap_err();
        assert!(matches!(err, CoverError::InvalidMatching { u: 0, v: 1, .. }));
        assert!(k2(&[(2, 0)], 2).validate().is_err());
        assert!(Cover::identity(&Graph::cycle(3), 1).is_valid());
        let not_edge = Cover::new(
            Graph::path(3),
            vec![1; 3],
            BTreeMap::from([((0, 2), vec![(0, 0)])]),
        );
        assert_eq!(not_edge.unwrap_err(), CoverError::NotAnEdge { u: 0, v: 2 });
    }

    #[test]
    fn list_covers() {
        let k2g = Graph::complete(2);
        let c = cover_from_lists(&k2g, &[vec![1, 2], vec![1, 2]]);
        assert_eq!(c.matching(0, 1), vec![(0, 0), (1, 1)]);
        let c = cover_from_lists(&k2g, &[vec![1, 2], vec![3, 4]]);
        assert!(c.matching(0, 1).is_empty());
        let c3 = cover_from_lists(&Graph::cycle(3), &[vec![1, 2], vec![1, 2], vec![1, 2]]);
        assert_eq!(c3, Cover::identity(&Graph::cycle(3), 2));
        assert!(find_p_transversal(&c3, &PropertyOracle::edgeless()).is_none());
    }

    /// All 8 transversals of the identity 2-cover of C3 induce an edge.
    #[test]
    fn c3_two_cover_by_enumeration() {
        let c = Cover::identity(&Graph::cycle(3), 2);
        let o = PropertyOracle::edgeless();
        let good = (0..8u32)
            .filter(|bits| {
                let choice: Vec<Option<usize>> =
                    (0..3).map(|v| Some((bits >> v & 1) as usize)).collect();
                o.is_member(&c.induced_graph(&choice))
            })
            .count();
        assert_eq!(good, 0);
        for v in 0..3 {
            assert!(find_p_v_transversal(&c, &o, v).is_some());
        }
    }

    #[test]
    fn even_cycle_has_transversal() {
        let c = Cover::identity(&Graph::cycle(4), 2);
        let t = find_p_transversal(&c, &PropertyOracle::edgeless()).unwrap();
        assert_eq!(t.choice, vec![0, 1, 0, 1]);
        assert!(find_p_transversal(&twisted_c4(), &PropertyOracle::edgeless()).is_none());
    }

    #[test]
    fn critical_cover_examples() {
        let o = PropertyOracle::edgeless();
        assert!(is_p_critical_cover(&k2(&[(0, 0)], 1), &o));
        assert!(!is_p_critical_cover(&k2(&[], 1), &o));
        assert!(is_p_critical_cover(&Cover::identity(&Graph::cycle(5), 2), &o));
        assert!(!is_p_critical_cover(&Cover::identity(&Graph::cycle(4), 2), &o));
    }

    #[test]
    fn low_vertex_examples() {
        let lv = low_vertex_subgraph(&k2(&[(0, 0)], 1), 1);
        assert_eq!(lv.low, vec![0, 1]);
        assert_eq!(lv.graph, Graph::complete(2));
        let lv = low_vertex_subgraph(&Cover::identity(&Graph::cycle(5), 2), 1);
        assert_eq!(lv.graph, Graph::cycle(5));
        let lv = low_vertex_subgraph(&Cover::identity(&Graph::complete(4), 3), 1);
        assert_eq!(lv.graph, Graph::complete(4));
    }

    #[test]
    fn exact_degree_fact_on_fixtures() {
        let o = PropertyOracle::edgeless();
        let fixtures = [
            Cover::identity(&Graph::cycle(5), 2),
            Cover::identity(&Graph::complete(4), 3),
            twisted_c4(),
            k2(&[(0, 0)], 1),
        ];
        for c in &fixtures {
            assert!(is_p_critical_cover(c, &o));
            let lv = low_vertex_subgraph(c, 1);
            for &v in &lv.low {
                let t = find_p_v_transversal(c, &o, v).unwrap();
                let stats = fiber_degree_stats(c, v, &t);
                assert_eq!(stats.iter().sum::<usize>(), c.base().degree(v));
                assert!(stats.iter().all(|&d| d == 1));
            }
        }
    }

    #[test]
    fn addresses_and_flat_h() {
        let c = Cover::new(
            Graph::path(3),
            vec![2, 0, 3],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(c.h_addr(0), (0, 0));
        assert_eq!(c.h_addr(2), (2, 0));
        assert_eq!(c.h_addr(4), (2, 2));
        let h = twisted_c4().h_graph();
        assert_eq!((h.order(), h.size()), (8, 8));
        assert!(h.is_cycle());
    }

    #[test]
    fn json_round_trip() {
        let c = twisted_c4();
        let text = serde_json::to_string(&c).unwrap();
        let back: Cover = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"graph": [[0,1]], "fibers": [2,2], "matchings": {"0-1": [[0,0],[0,1]]}}"#;
        let err = serde_json::from_str::<Cover>(bad).unwrap_err().to_string();
        assert!(err.contains("0-1"), "{err}");
    }
}
