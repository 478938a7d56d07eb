//! Brute-force oracles written independently of the library's searches.
//! They only use the plain accessors of `Graph` and `Cover`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dpcolor::graph::Graph;
use dpcolor::Cover;

/// Which property an oracle checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    Edgeless,
    Forest,
}

/// Membership of the subgraph induced by `set` in a graph given by masks.
pub fn member(prop: Prop, adj: &[u64], set: u64) -> bool {
    let vertices: Vec<usize> = (0..adj.len()).filter(|&v| set >> v & 1 == 1).collect();
    let edges: usize = vertices.iter().map(|&v| (adj[v] & set).count_ones() as usize).sum::<usize>() / 2;
    match prop {
        Prop::Edgeless => edges == 0,
        Prop::Forest => {
            // acyclic iff |E| = |V| - #components
            let mut seen = 0u64;
            let mut comps = 0;
            for &v in &vertices {
                if seen >> v & 1 == 1 {
                    continue;
                }
                comps += 1;
                let mut stack = vec![v];
                seen |= 1 << v;
                while let Some(u) = stack.pop() {
                    let mut nb = adj[u] & set & !seen;
                    while nb != 0 {
                        let w = nb.trailing_zeros() as usize;
                        nb &= nb - 1;
                        seen |= 1 << w;
                        stack.push(w);
                    }
                }
            }
            edges + comps == vertices.len()
        }
    }
}

pub fn graph_masks(g: &Graph) -> Vec<u64> {
    (0..g.order())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Adjacency masks of `H` on flat ids `offset(v) + i`, built from the
/// matchings alone.
pub fn h_masks(c: &Cover) -> Vec<u64> {
    let n = c.base().order();
    let mut offset = vec![0; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + c.fiber_size(v);
    }
    let mut adj = vec![0u64; offset[n]];
    for (&(u, v), pairs) in c.matchings() {
        for &(i, j) in pairs {
            let (a, b) = (offset[u] + i, offset[v] + j);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    adj
}

fn offsets(c: &Cover) -> Vec<usize> {
    let mut offset = vec![0; c.base().order()];
    for v in 1..offset.len() {
        offset[v] = offset[v - 1] + c.fiber_size(v - 1);
    }
    offset
}

/// Calls `visit` with every transversal as a choice vector and the set of
/// flat ids; stops early when `visit` returns true.
pub fn any_transversal(c: &Cover, mut visit: impl FnMut(&[usize], u64) -> bool) -> bool {
    let n = c.base().order();
    if (0..n).any(|v| c.fiber_size(v) == 0) {
        return false;
    }
    let offset = offsets(c);
    let mut choice = vec![0usize; n];
    loop {
        let set = (0..n).fold(0u64, |m, v| m | 1 << (offset[v] + choice[v]));
        if visit(&choice, set) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            choice[pos] += 1;
            if choice[pos] < c.fiber_size(pos) {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

pub fn has_p_transversal(c: &Cover, prop: Prop) -> bool {
    let adj = h_masks(c);
    any_transversal(c, |_, set| member(prop, &adj, set))
}

/// A transversal of `c` avoiding vertex `v` (partial) with property `prop`.
pub fn has_p_v_transversal(c: &Cover, prop: Prop, v: usize) -> bool {
    let keep: Vec<usize> = (0..c.base().order()).filter(|&w| w != v).collect();
    has_p_transversal(&c.restrict(&keep), prop)
}

pub fn is_critical(c: &Cover, prop: Prop) -> bool {
    !has_p_transversal(c, prop) && (0..c.base().order()).all(|v| has_p_v_transversal(c, prop, v))
}

/// Every nonempty subset of `set` has a vertex of degree below `f`.
pub fn strictly_f_degenerate_by_subsets(adj: &[u64], set: u64, f: &[u32]) -> bool {
    let mut sub = set;
    while sub != 0 {
        let ok = (0..adj.len())
            .filter(|&x| sub >> x & 1 == 1)
            .any(|x| ((adj[x] & sub).count_ones()) < f[x]);
        if !ok {
            return false;
        }
        sub = (sub - 1) & set;
    }
    true
}

/// Whether `g` has a colouring with `k` colours whose classes have `prop`.
pub fn colorable(g: &Graph, k: usize, prop: Prop) -> bool {
    let lists = vec![(0..k as u32).collect::<Vec<_>>(); g.order()];
    list_colorable(g, &lists, prop)
}

pub fn list_colorable(g: &Graph, lists: &[Vec<u32>], prop: Prop) -> bool {
    let n = g.order();
    if lists.iter().any(|l| l.is_empty()) {
        return n == 0;
    }
    let adj = graph_masks(g);
    let mut idx = vec![0usize; n];
    loop {
        let mut classes: BTreeMap<u32, u64> = BTreeMap::new();
        for v in 0..n {
            *classes.entry(lists[v][idx[v]]).or_default() |= 1 << v;
        }
        if classes.values().all(|&set| member(prop, &adj, set)) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All partial matchings between two `k`-sets.
pub fn partial_matchings(k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![]];
    for i in 0..k {
        let mut next = Vec::new();
        for m in &out {
            next.push(m.clone());
            for j in 0..k {
                if m.iter().all(|&(_, b)| b != j) {
                    let mut m2 = m.clone();
                    m2.push((i, j));
                    next.push(m2);
                }
            }
        }
        out = next;
    }
    out
}

/// Every cover of `g` with fibers of size `k` and arbitrary partial
/// matchings; `visit` returns true to stop.
pub fn for_each_raw_cover(g: &Graph, k: usize, mut visit: impl FnMut(Cover) -> bool) -> bool {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let options = partial_matchings(k);
    let mut idx = vec![0usize; edges.len()];
    loop {
        let m: BTreeMap<_, _> = edges.iter().zip(&idx).map(|(&e, &i)| (e, options[i].clone())).collect();
        let c = Cover::new(g.clone(), vec![k; g.order()], m).expect("valid cover");
        if visit(c) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == edges.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < options.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Shrinks a cover without a `prop`-transversal to a critical one by
/// deleting base vertices while no transversal appears. Returns the kept
/// vertices and the restricted cover.
pub fn minimize_to_critical(c: &Cover, prop: Prop) -> (Vec<usize>, Cover) {
    let mut keep: Vec<usize> = (0..c.base().order()).collect();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if !has_p_transversal(&c.restrict(&trial), prop) {
            keep = trial;
        } else {
            i += 1;
        }
    }
    let r = c.restrict(&keep);
    (keep, r)
}
