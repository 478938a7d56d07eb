//! Graph properties used as colour-class constraints.
//!
//! The built-in properties are the edgeless graphs `O` and the
//! `k`-degenerate graphs `Dk`. Custom properties wrap a user predicate and
//! carry self-declared closure flags, which can be spot-checked on small
//! graphs with [`PropertyOracle::verify_flags`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{all_graphs, connected_graphs, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropertyError {
    #[error("no critical graph of order <= {0} found for this property")]
    SearchExhausted(usize),
    #[error("unknown property token {0:?} (expected O or Dk)")]
    UnknownToken(String),
}

type Predicate = Arc<dyn Fn(&Graph) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum PropertyKind {
    Edgeless,
    Degenerate(usize),
    Custom(Predicate),
}

#[derive(Clone)]
pub struct PropertyOracle {
    name: String,
    kind: PropertyKind,
    pub hereditary: bool,
    pub additive: bool,
    pub monotone: bool,
    d_value: Option<usize>,
}

impl fmt::Debug for PropertyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertyOracle")
            .field("name", &self.name)
            .field("hereditary", &self.hereditary)
            .field("additive", &self.additive)
            .field("monotone", &self.monotone)
            .field("d_value", &self.d_value)
            .finish()
    }
}

/// Result of [`PropertyOracle::d_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DValue {
    pub value: usize,
    /// `false` when the value comes from a bounded search and is only an
    /// upper bound on the true minimum degree over critical graphs.
    pub exact: bool,
}

/// A closure flag that failed its small-order spot check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagViolation {
    pub flag: &'static str,
    pub witness: Graph,
}

impl PropertyOracle {
    /// `O`: graphs without edges.
    pub fn edgeless() -> Self {
        PropertyOracle {
            name: "O".into(),
            kind: PropertyKind::Edgeless,
            hereditary: true,
            additive: true,
            monotone: true,
            d_value: Some(1),
        }
    }

    /// `Dk`: graphs in which every subgraph has a vertex of degree at most `k`.
    pub fn degenerate(k: usize) -> Self {
        PropertyOracle {
            name: format!("D{k}"),
            kind: PropertyKind::Degenerate(k),
            hereditary: true,
            additive: true,
            monotone: true,
            d_value: Some(k + 1),
        }
    }

    pub fn custom(
        name: impl Into<String>,
        member: impl Fn(&Graph) -> bool + Send + Sync + 'static,
        hereditary: bool,
        additive: bool,
        monotone: bool,
    ) -> Self {
        PropertyOracle {
            name: name.into(),
            kind: PropertyKind::Custom(Arc::new(member)),
            hereditary,
            additive,
            monotone,
            d_value: None,
        }
    }

    /// Declares a known value of `d(P)` for a custom property.
    pub fn with_d_value(mut self, r: usize) -> Self {
        self.d_value = Some(r);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &PropertyKind {
        &self.kind
    }

    pub fn declared_d(&self) -> Option<usize> {
        self.d_value
    }

    /// Whether this property is `O`. For a reliable property this is the
    /// case exactly when `K_2` is not a member.
    pub fn is_edgeless_class(&self) -> bool {
        match self.kind {
            PropertyKind::Edgeless | PropertyKind::Degenerate(0) => true,
            PropertyKind::Degenerate(_) => false,
            PropertyKind::Custom(_) => {
                !self.is_member(&Graph::complete(2)) && self.is_member(&Graph::empty(1))
            }
        }
    }

    pub fn is_member(&self, g: &Graph) -> bool {
        match &self.kind {
            PropertyKind::Edgeless => g.size() == 0,
            PropertyKind::Degenerate(k) => is_k_degenerate(g, *k),
            PropertyKind::Custom(p) => p(g),
        }
    }

    /// Membership of the subgraph induced by `set` in the graph given by
    /// adjacency bitmasks.
    pub fn is_member_masked(&self, adj: &[u64], set: u64) -> bool {
        match &self.kind {
            PropertyKind::Edgeless => {
                let mut rest = set;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if adj[v] & set != 0 {
                        return false;
                    }
                }
                true
            }
            PropertyKind::Degenerate(k) => masked_degenerate(adj, set, *k),
            PropertyKind::Custom(p) => p(&masked_graph(adj, set)),
        }
    }

    /// `g` is not a member but every vertex-deleted subgraph is.
    pub fn is_cr(&self, g: &Graph) -> bool {
        !self.is_member(g) && (0..g.order()).all(|v| self.is_member(&g.remove_vertex(v)))
    }

    /// `d(P)`, the least minimum degree of a critical graph. Declared values
    /// are returned as exact; otherwise connected graphs up to
    /// `search_order_limit` are searched.
    pub fn d_of(&self, search_order_limit: usize) -> Result<DValue, PropertyError> {
        if let Some(value) = self.d_value {
            return Ok(DValue { value, exact: true });
        }
        (1..=search_order_limit)
            .flat_map(connected_graphs)
            .filter(|g| self.is_cr(g))
            .map(|g| g.min_degree())
            .min()
            .map(|value| DValue {
                value,
                exact: false,
            })
            .ok_or(PropertyError::SearchExhausted(search_order_limit))
    }

    /// `d(P)` using the default search limit of order 6 for custom properties.
    pub fn r(&self) -> Result<usize, PropertyError> {
        self.d_of(6).map(|d| d.value)
    }

    /// Every colour class induces a member. `coloring[v]` is the colour of `v`.
    pub fn validate_coloring(&self, g: &Graph, coloring: &[usize]) -> bool {
        if coloring.len() != g.order() {
            return false;
        }
        let mut colors: Vec<usize> = coloring.to_vec();
        colors.sort_unstable();
        colors.dedup();
        colors.into_iter().all(|c| {
            let class: Vec<usize> = (0..g.order()).filter(|&v| coloring[v] == c).collect();
            self.is_member(&g.induced(&class))
        })
    }

    /// Spot-checks the declared flags on all graphs of order at most
    /// `max_order` and returns every violation found.
    pub fn verify_flags(&self, max_order: usize) -> Vec<FlagViolation> {
        let mut out = Vec::new();
        let classes: Vec<Vec<Graph>> = (0..=max_order).map(all_graphs).collect();
        for g in classes.iter().flatten() {
            let member = self.is_member(g);
            if self.hereditary && member {
                if let Some(v) = (0..g.order()).find(|&v| !self.is_member(&g.remove_vertex(v))) {
                    out.push(FlagViolation {
                        flag: "hereditary",
                        witness: g.remove_vertex(v),
                    });
                }
            }
            if self.monotone && member {
                let edges: Vec<_> = g.edges().collect();
                for &e in &edges {
                    let rest: Vec<_> = edges.iter().copied().filter(|&f| f != e).collect();
                    let sub = Graph::from_edges(g.order(), &rest).unwrap();
                    if !self.is_member(&sub) {
                        out.push(FlagViolation {
                            flag: "monotone",
                            witness: sub,
                        });
                        break;
                    }
                }
            }
        }
        if self.additive {
            let members: Vec<&Graph> = classes
                .iter()
                .flatten()
                .filter(|g| g.order() > 0 && self.is_member(g))
                .collect();
            for a in &members {
                for b in &members {
                    if a.order() + b.order() <= max_order {
                        let u = a.disjoint_union(b);
                        if !self.is_member(&u) {
                            out.push(FlagViolation {
                                flag: "additive",
                                witness: u,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

impl FromStr for PropertyOracle {
    type Err = PropertyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" => Ok(PropertyOracle::edgeless()),
            _ => s
                .strip_prefix('D')
                .and_then(|k| k.parse::<usize>().ok())
                .map(PropertyOracle::degenerate)
                .ok_or_else(|| PropertyError::UnknownToken(s.to_string())),
        }
    }
}

fn is_k_degenerate(g: &Graph, k: usize) -> bool {
    let n = g.order();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] <= k {
                    removed[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count == n
}

pub(crate) fn masked_degenerate(adj: &[u64], set: u64, k: usize) -> bool {
    let mut rest = set;
    loop {
        let mut peeled = false;
        let mut scan = rest;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if ((adj[v] & rest).count_ones() as usize) <= k {
                rest &= !(1 << v);
                peeled = true;
            }
        }
        if rest == 0 {
            return true;
        }
        if !peeled {
            return false;
        }
    }
}

pub(crate) fn masked_graph(adj: &[u64], set: u64) -> Graph {
    let verts: Vec<usize> = (0..64).filter(|&v| set >> v & 1 == 1).collect();
    let mut edges = Vec::new();
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate().skip(i + 1) {
            if adj[u] >> v & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(verts.len(), &edges).unwrap()
}
