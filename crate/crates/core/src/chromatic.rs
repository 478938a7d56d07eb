//! Exact `P`-chromatic, `P`-choice and `P`-DP-chromatic numbers of small
//! graphs, with witnesses.
//!
//! Every decision is an exhaustive search, with these sound shortcuts:
//!
//! * Core reduction. For `O`, `D_j` and custom properties flagged
//!   hereditary and additive, a vertex of degree below `k * r` can always be
//!   coloured last (some fiber vertex or list colour has fewer than `r`
//!   neighbours in its class), so it is deleted before searching, repeatedly.
//!   An empty core means the answer is yes.
//! * Cover normalization. Permuting a fiber does not change whether a
//!   cover has a good transversal, so matchings on a spanning tree are taken
//!   to be (sub-)identities. For monotone properties adding matching edges
//!   only removes good transversals, so only perfect matchings are tried.
//!   With the tree fixed, the remaining freedom is one global relabelling,
//!   which conjugates every permutation at once; the first non-tree edge
//!   therefore only needs one permutation per cycle type.

use std::cell::Cell;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cover::{find_p_transversal, Cover};
use crate::graph::Graph;
use crate::property::{PropertyKind, PropertyOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChromaticError {
    #[error("instance too large: {0}")]
    TooLarge(String),
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_order: usize,
    /// Search nodes allowed per call before giving up.
    pub max_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 10,
            max_work: 20_000_000_000,
        }
    }
}

struct Budget<'a> {
    limits: &'a Limits,
    used: Cell<u64>,
}

impl<'a> Budget<'a> {
    fn new(limits: &'a Limits) -> Self {
        Budget {
            limits,
            used: Cell::new(0),
        }
    }

    fn tick(&self) -> Result<(), ChromaticError> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limits.max_work {
            return Err(ChromaticError::TooLarge(format!(
                "search budget of {} nodes exhausted",
                self.limits.max_work
            )));
        }
        Ok(())
    }

    fn check_order(&self, g: &Graph) -> Result<(), ChromaticError> {
        if g.order() > self.limits.max_order {
            return Err(ChromaticError::TooLarge(format!(
                "order {} exceeds the limit {}",
                g.order(),
                self.limits.max_order
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "data")]
pub enum Witness {
    None,
    /// A `P`-colouring with `value` colours.
    Coloring(Vec<usize>),
    /// Lists of size `value - 1` with no `P`-colouring.
    Lists(Vec<Vec<u32>>),
    /// A `(value - 1)`-cover with no `P`-transversal.
    Cover(Cover),
}

#[derive(Clone, Debug, Serialize)]
pub struct ChromaticResult {
    pub value: usize,
    pub witness: Witness,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ListDecision {
    Choosable,
    BadLists(Vec<Vec<u32>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoverDecision {
    AllCoverable,
    BadCover(Cover),
}

/// `r` for the core reduction, when it applies.
fn reduction_r(p: &PropertyOracle) -> Option<usize> {
    match p.kind() {
        PropertyKind::Edgeless => Some(1),
        PropertyKind::Degenerate(j) => Some(j + 1),
        PropertyKind::Custom(_) if p.hereditary && p.additive && p.is_member(&Graph::empty(1)) => {
            Some(1)
        }
        PropertyKind::Custom(_) => None,
    }
}

/// Vertices left after repeatedly deleting vertices of degree `< threshold`.
fn core_vertices(g: &Graph, threshold: usize) -> Vec<usize> {
    let n = g.order();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let Some(v) = (0..n).find(|&v| alive[v] && deg[v] < threshold) else {
            break;
        };
        alive[v] = false;
        for &w in g.neighbors(v) {
            deg[w] -= 1;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

// ---------------------------------------------------------------------------
// chi

/// A `P`-colouring with at most `k` colours, if one exists. Colours are used
/// in order of first appearance.
pub fn k_coloring(g: &Graph, p: &PropertyOracle, k: usize) -> Option<Vec<usize>> {
    k_coloring_budget(g, p, k, &Budget::new(&Limits::default())).ok().flatten()
}

fn k_coloring_budget(
    g: &Graph,
    p: &PropertyOracle,
    k: usize,
    budget: &Budget,
) -> Result<Option<Vec<usize>>, ChromaticError> {
    let n = g.order();
    if n == 0 {
        return Ok(Some(vec![]));
    }
    let adj = g.adjacency_masks();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut classes = vec![0u64; k];
    let mut color = vec![usize::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        used: usize,
        order: &[usize],
        adj: &[u64],
        p: &PropertyOracle,
        classes: &mut [u64],
        color: &mut [usize],
        budget: &Budget,
    ) -> Result<bool, ChromaticError> {
        budget.tick()?;
        if i == order.len() {
            return Ok(p.hereditary || classes.iter().all(|&c| p.is_member_masked(adj, c)));
        }
        let v = order[i];
        let k = classes.len();
        for c in 0..k.min(used + 1) {
            classes[c] |= 1 << v;
            if !p.hereditary || p.is_member_masked(adj, classes[c]) {
                color[v] = c;
                if rec(i + 1, used.max(c + 1), order, adj, p, classes, color, budget)? {
                    return Ok(true);
                }
            }
            classes[c] &= !(1 << v);
        }
        Ok(false)
    }
    if rec(0, 0, &order, &adj, p, &mut classes, &mut color, budget)? {
        Ok(Some(color))
    } else {
        Ok(None)
    }
}

pub fn chi(g: &Graph, p: &PropertyOracle) -> Result<ChromaticResult, ChromaticError> {
    chi_with(g, p, &Limits::default())
}

pub fn chi_with(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<ChromaticResult, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    for k in 0..=g.order() {
        if let Some(c) = k_coloring_budget(g, p, k, &budget)? {
            return Ok(ChromaticResult {
                value: k,
                witness: Witness::Coloring(c),
                notes: vec![format!("search nodes: {}", budget.used.get())],
            });
        }
    }
    // every vertex in its own class is a colouring when K_1 is a member
    Err(ChromaticError::TooLarge("no colouring exists: K_1 is not a member".into()))
}

// ---------------------------------------------------------------------------
// chi_list

/// A `(P, L)`-colouring (one colour per vertex from its list), if any.
pub fn list_coloring(g: &Graph, p: &PropertyOracle, lists: &[Vec<u32>]) -> Option<Vec<u32>> {
    list_coloring_budget(g, p, lists, &Budget::new(&Limits::default())).ok().flatten()
}

fn list_coloring_budget(
    g: &Graph,
    p: &PropertyOracle,
    lists: &[Vec<u32>],
    budget: &Budget,
) -> Result<Option<Vec<u32>>, ChromaticError> {
    let n = g.order();
    let adj = g.adjacency_masks();
    let mut palette: Vec<u32> = lists.iter().flatten().copied().collect();
    palette.sort_unstable();
    palette.dedup();
    let dense: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| l.iter().map(|c| palette.binary_search(c).unwrap()).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (dense[v].len(), std::cmp::Reverse(g.degree(v)), v));
    let mut classes = vec![0u64; palette.len()];
    let mut color = vec![0usize; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        order: &[usize],
        dense: &[Vec<usize>],
        adj: &[u64],
        p: &PropertyOracle,
        classes: &mut [u64],
        color: &mut [usize],
        budget: &Budget,
    ) -> Result<bool, ChromaticError> {
        budget.tick()?;
        if i == order.len() {
            return Ok(p.hereditary || classes.iter().all(|&c| p.is_member_masked(adj, c)));
        }
        let v = order[i];
        for &c in &dense[v] {
            classes[c] |= 1 << v;
            if !p.hereditary || p.is_member_masked(adj, classes[c]) {
                color[v] = c;
                if rec(i + 1, order, dense, adj, p, classes, color, budget)? {
                    return Ok(true);
                }
            }
            classes[c] &= !(1 << v);
        }
        Ok(false)
    }
    if rec(0, &order, &dense, &adj, p, &mut classes, &mut color, budget)? {
        Ok(Some(color.into_iter().map(|c| palette[c]).collect()))
    } else {
        Ok(None)
    }
}

/// Decides whether every assignment of `k`-lists admits a `P`-colouring.
///
/// Lists are enumerated up to renaming colours: colours are introduced in
/// increasing order, so the pool never exceeds `k * n` colours. For a
/// hereditary property a partial assignment that already fails is
/// reported at once (lists of later vertices are irrelevant).
pub fn chi_list_decide(
    g: &Graph,
    p: &PropertyOracle,
    k: usize,
    limits: &Limits,
) -> Result<ListDecision, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    list_decide(g, p, k, &budget)
}

fn list_decide(g: &Graph, p: &PropertyOracle, k: usize, budget: &Budget) -> Result<ListDecision, ChromaticError> {
    let n = g.order();
    let constant: Vec<u32> = (0..k as u32).collect();
    if n == 0 {
        return Ok(ListDecision::Choosable);
    }
    if k == 0 {
        return Ok(ListDecision::BadLists(vec![vec![]; n]));
    }
    let core = match reduction_r(p) {
        Some(r) if p.hereditary => core_vertices(g, k * r),
        _ => (0..n).collect(),
    };
    if core.is_empty() {
        return Ok(ListDecision::Choosable);
    }
    let h = g.induced(&core);
    let m = h.order();
    // vertex order: each vertex after the first has an earlier neighbour when possible
    let order = bfs_order(&h);
    let mut lists: Vec<Vec<u32>> = vec![vec![]; m];
    let found = enumerate_lists(&h, p, k, &order, 0, 0, &mut lists, budget)?;
    Ok(match found {
        None => ListDecision::Choosable,
        Some(local) => {
            let mut full = vec![constant; n];
            for (i, &v) in core.iter().enumerate() {
                full[v] = local[i].clone();
            }
            ListDecision::BadLists(full)
        }
    })
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| !seen[w]).collect();
            nb.sort_by_key(|&w| (std::cmp::Reverse(g.degree(w)), w));
            for w in nb {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

/// k-subsets of `[0, used + k)` whose new colours are exactly
/// `used, used + 1, ...`, in lexicographic order.
fn canonical_lists(used: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for fresh in 0..=k {
        let old = k - fresh;
        if old as u32 > used {
            continue;
        }
        for mut subset in subsets(used as usize, old) {
            subset.extend((0..fresh).map(|i| used as usize + i));
            out.push(subset.into_iter().map(|c| c as u32).collect());
        }
    }
    out
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_lists(
    g: &Graph,
    p: &PropertyOracle,
    k: usize,
    order: &[usize],
    i: usize,
    used: u32,
    lists: &mut Vec<Vec<u32>>,
    budget: &Budget,
) -> Result<Option<Vec<Vec<u32>>>, ChromaticError> {
    budget.tick()?;
    let n = g.order();
    if i > 0 && (p.hereditary || i == n) {
        let assigned = &order[..i];
        let sub = g.induced(assigned);
        let sub_lists: Vec<Vec<u32>> = assigned.iter().map(|&v| lists[v].clone()).collect();
        if list_coloring_budget(&sub, p, &sub_lists, budget)?.is_none() {
            let mut full = lists.clone();
            for &v in &order[i..] {
                full[v] = (0..k as u32).collect();
            }
            return Ok(Some(full));
        }
    }
    if i == n {
        return Ok(None);
    }
    let v = order[i];
    let choices = if i == 0 {
        vec![(0..k as u32).collect()]
    } else {
        canonical_lists(used, k)
    };
    for l in choices {
        let top = l.iter().copied().max().map_or(used, |c| used.max(c + 1));
        lists[v] = l;
        if let Some(found) = enumerate_lists(g, p, k, order, i + 1, top, lists, budget)? {
            return Ok(Some(found));
        }
    }
    lists[v].clear();
    Ok(None)
}

/// Least `k` such that every `k`-list assignment admits a `P`-colouring.
pub fn chi_list(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<ChromaticResult, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    let start = chi_with(g, p, limits)?.value;
    let mut witness = if start > 0 {
        Witness::Lists(vec![(0..start as u32 - 1).collect(); g.order()])
    } else {
        Witness::None
    };
    for k in start..=g.order().max(start) {
        match list_decide(g, p, k, &budget)? {
            ListDecision::Choosable => {
                return Ok(ChromaticResult {
                    value: k,
                    witness,
                    notes: vec![format!("search nodes: {}", budget.used.get())],
                })
            }
            ListDecision::BadLists(l) => witness = Witness::Lists(l),
        }
    }
    unreachable!("lists of size |G| are always colourable")
}

// ---------------------------------------------------------------------------
// chi_DP

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// One permutation per cycle type: cycles of non-increasing length on
/// consecutive points.
fn cycle_type_representatives(k: usize) -> Vec<Vec<usize>> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=n.min(max)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut reps: Vec<Vec<usize>> = partitions(k, k)
        .into_iter()
        .map(|parts| {
            let mut perm = vec![0; k];
            let mut start = 0;
            for len in parts {
                for i in 0..len {
                    perm[start + i] = start + (i + 1) % len;
                }
                start += len;
            }
            perm
        })
        .collect();
    reps.sort();
    reps
}

/// Spanning forest edges (breadth-first from vertex 0 of each component)
/// followed by the remaining edges.
fn tree_split(g: &Graph) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut tree = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    tree.push((v.min(w), v.max(w)));
                    queue.push_back(w);
                }
            }
        }
    }
    tree.sort_unstable();
    let rest = g.edges().filter(|e| tree.binary_search(e).is_err()).collect();
    (tree, rest)
}

/// Search state for perfect-matching covers of a connected graph with the
/// spanning tree fixed to identities. A transversal is a number in base
/// `k`; `alive` holds those still inducing a member of `P`.
struct DpSearch<'a> {
    g: &'a Graph,
    p: &'a PropertyOracle,
    k: usize,
    tree: Vec<(usize, usize)>,
    rest: Vec<(usize, usize)>,
    perms: Vec<Vec<usize>>,
    reps: Vec<Vec<usize>>,
    pow: Vec<usize>,
    edgeless: bool,
    budget: &'a Budget<'a>,
}

#[derive(Default)]
struct Census {
    bad: u128,
    bad_list: u128,
    first_non_list: Option<Vec<Vec<usize>>>,
}

impl<'a> DpSearch<'a> {
    fn new(g: &'a Graph, p: &'a PropertyOracle, k: usize, budget: &'a Budget<'a>) -> Result<Self, ChromaticError> {
        let n = g.order();
        let total = (k as f64).powi(n as i32);
        if total > 5.0e6 {
            return Err(ChromaticError::TooLarge(format!(
                "{k}^{n} transversals is beyond the cover search"
            )));
        }
        let (tree, rest) = tree_split(g);
        let pow = (0..n).map(|v| k.pow(v as u32)).collect();
        Ok(DpSearch {
            g,
            p,
            k,
            tree,
            rest,
            perms: permutations(k),
            reps: cycle_type_representatives(k),
            pow,
            edgeless: p.is_edgeless_class(),
            budget,
        })
    }

    fn digit(&self, t: usize, v: usize) -> usize {
        t / self.pow[v] % self.k
    }

    /// Adjacency masks of `H[T]` for transversal `t` given the tree and
    /// the first `assigned.len()` non-tree edges.
    fn masks(&self, t: usize, assigned: &[Vec<usize>]) -> Vec<u64> {
        let mut adj = vec![0u64; self.g.order()];
        let mut add = |u: usize, v: usize| {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        };
        for &(u, v) in &self.tree {
            if self.digit(t, u) == self.digit(t, v) {
                add(u, v);
            }
        }
        for (e, perm) in assigned.iter().enumerate() {
            let (u, v) = self.rest[e];
            if perm[self.digit(t, u)] == self.digit(t, v) {
                add(u, v);
            }
        }
        adj
    }

    fn initial(&self) -> Vec<u32> {
        let n = self.g.order();
        let all = self.pow.last().map_or(1, |&p| p * self.k);
        let full = crate::config::full_mask(n);
        (0..all)
            .filter(|&t| self.p.is_member_masked(&self.masks(t, &[]), full))
            .map(|t| t as u32)
            .collect()
    }

    fn active(&self, t: u32, e: usize, perm: &[usize]) -> bool {
        let (u, v) = self.rest[e];
        perm[self.digit(t as usize, u)] == self.digit(t as usize, v)
    }

    /// Transversals that survive giving edge `e` the permutation `perm`.
    fn survivors(&self, alive: &[u32], e: usize, perm: &[usize], assigned: &mut Vec<Vec<usize>>) -> Vec<u32> {
        let full = crate::config::full_mask(self.g.order());
        assigned.push(perm.to_vec());
        let out = alive
            .iter()
            .copied()
            .filter(|&t| {
                !self.active(t, e, perm)
                    || (!self.edgeless && self.p.is_member_masked(&self.masks(t as usize, assigned), full))
            })
            .collect();
        assigned.pop();
        out
    }

    /// Largest number of alive transversals one permutation on edge `e`
    /// can touch: an upper bound on what the edge can remove.
    fn max_touch(&self, alive: &[u32], e: usize) -> usize {
        let (u, v) = self.rest[e];
        let k = self.k;
        let mut counts = vec![0usize; k * k];
        for &t in alive {
            counts[self.digit(t as usize, u) * k + self.digit(t as usize, v)] += 1;
        }
        self.perms
            .iter()
            .map(|perm| (0..k).map(|a| counts[a * k + perm[a]]).sum())
            .max()
            .unwrap_or(0)
    }

    fn can_empty(&self, alive: &[u32], from: usize) -> bool {
        let mut reach = 0;
        for e in from..self.rest.len() {
            reach += self.max_touch(alive, e);
            if reach >= alive.len() {
                return true;
            }
        }
        false
    }

    /// Candidate permutations for edge `e`, most destructive first.
    fn candidates(&self, alive: &[u32], e: usize, assigned: &mut Vec<Vec<usize>>, use_reps: bool) -> Vec<(Vec<usize>, Vec<u32>)> {
        let pool = if use_reps && e == 0 { &self.reps } else { &self.perms };
        let mut c: Vec<(Vec<usize>, Vec<u32>)> = pool
            .iter()
            .map(|perm| (perm.clone(), self.survivors(alive, e, perm, assigned)))
            .collect();
        c.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)));
        c
    }

    /// Looks for permutations on the non-tree edges leaving no transversal.
    fn find_bad(&self, alive: Vec<u32>, assigned: &mut Vec<Vec<usize>>) -> Result<bool, ChromaticError> {
        self.budget.tick()?;
        let e = assigned.len();
        if alive.is_empty() {
            while assigned.len() < self.rest.len() {
                assigned.push((0..self.k).collect());
            }
            return Ok(true);
        }
        if e == self.rest.len() || !self.can_empty(&alive, e) {
            return Ok(false);
        }
        for (perm, next) in self.candidates(&alive, e, assigned, true) {
            assigned.push(perm);
            if self.find_bad(next, assigned)? {
                return Ok(true);
            }
            assigned.pop();
        }
        Ok(false)
    }

    /// Counts bad covers among all normalized covers (no cycle-type
    /// reduction), and those that are list covers (all identities).
    fn census(&self, alive: Vec<u32>, assigned: &mut Vec<Vec<usize>>, all_identity: bool, out: &mut Census) -> Result<(), ChromaticError> {
        self.budget.tick()?;
        let e = assigned.len();
        let remaining = (self.rest.len() - e) as u32;
        if alive.is_empty() {
            out.bad += (self.perms.len() as u128).pow(remaining);
            if all_identity {
                out.bad_list += 1;
            }
            if out.first_non_list.is_none() && (!all_identity || remaining > 0) {
                let mut a = assigned.clone();
                if all_identity {
                    // the first non-identity completion
                    a.push(self.perms[1].clone());
                }
                while a.len() < self.rest.len() {
                    a.push((0..self.k).collect());
                }
                out.first_non_list = Some(a);
            }
            return Ok(());
        }
        if e == self.rest.len() || !self.can_empty(&alive, e) {
            return Ok(());
        }
        let identity: Vec<usize> = (0..self.k).collect();
        for perm in self.perms.clone() {
            let next = self.survivors(&alive, e, &perm, assigned);
            let id = all_identity && perm == identity;
            assigned.push(perm);
            self.census(next, assigned, id, out)?;
            assigned.pop();
        }
        Ok(())
    }

    fn cover(&self, assigned: &[Vec<usize>]) -> Cover {
        let mut m = BTreeMap::new();
        for &e in &self.tree {
            m.insert(e, (0..self.k).map(|i| (i, i)).collect());
        }
        for (e, perm) in assigned.iter().enumerate() {
            m.insert(self.rest[e], perm.iter().enumerate().map(|(a, &b)| (a, b)).collect());
        }
        Cover::new(self.g.clone(), vec![self.k; self.g.order()], m).expect("normalized cover is valid")
    }
}

/// Lifts a bad cover of `g[vertices]` to `g`: identity matchings elsewhere.
fn lift_cover(g: &Graph, k: usize, vertices: &[usize], local: &Cover) -> Cover {
    let mut m: BTreeMap<(usize, usize), Vec<(usize, usize)>> =
        g.edges().map(|e| (e, (0..k).map(|i| (i, i)).collect())).collect();
    for (a, b) in local.base().edges() {
        let (u, v) = (vertices[a], vertices[b]);
        let pairs = local.matching(a, b);
        if u < v {
            m.insert((u, v), pairs);
        } else {
            m.insert((v, u), pairs.into_iter().map(|(i, j)| (j, i)).collect());
        }
    }
    Cover::new(g.clone(), vec![k; g.order()], m).expect("lifted cover is valid")
}

/// Decides whether every `k`-cover of `g` has a `P`-transversal, returning
/// a bad cover otherwise.
pub fn chi_dp_decide(g: &Graph, p: &PropertyOracle, k: usize, limits: &Limits) -> Result<CoverDecision, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    dp_decide(g, p, k, &budget)
}

fn dp_decide(g: &Graph, p: &PropertyOracle, k: usize, budget: &Budget) -> Result<CoverDecision, ChromaticError> {
    let n = g.order();
    if n == 0 {
        return Ok(CoverDecision::AllCoverable);
    }
    if k == 0 {
        return Ok(CoverDecision::BadCover(
            Cover::new(g.clone(), vec![0; n], BTreeMap::new()).expect("empty fibers"),
        ));
    }
    if !p.hereditary {
        return raw_partial_decide(g, p, k, budget);
    }
    let core = match reduction_r(p) {
        Some(r) => core_vertices(g, k * r),
        None => (0..n).collect(),
    };
    let h = g.induced(&core);
    for comp in h.components() {
        let vertices: Vec<usize> = comp.iter().map(|&i| core[i]).collect();
        let sub = g.induced(&vertices);
        let local = if p.monotone {
            let search = DpSearch::new(&sub, p, k, budget)?;
            let mut assigned = Vec::new();
            if search.find_bad(search.initial(), &mut assigned)? {
                Some(search.cover(&assigned))
            } else {
                None
            }
        } else {
            match raw_partial_decide(&sub, p, k, budget)? {
                CoverDecision::BadCover(c) => Some(c),
                CoverDecision::AllCoverable => None,
            }
        };
        if let Some(local) = local {
            return Ok(CoverDecision::BadCover(lift_cover(g, k, &vertices, &local)));
        }
    }
    Ok(CoverDecision::AllCoverable)
}

/// All partial matchings between two `k`-sets, as pair lists.
fn partial_matchings(k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; k];
    fn rec(i: usize, k: usize, cur: &mut Vec<(usize, usize)>, used: &mut [bool], out: &mut Vec<Vec<(usize, usize)>>) {
        if i == k {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, k, cur, used, out);
        for j in 0..k {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, k, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(0, k, &mut cur, &mut used, &mut out);
    out
}

/// Covers with arbitrary partial matchings, spanning-tree edges reduced to
/// sub-identities. Used for properties not flagged monotone.
fn raw_partial_decide(g: &Graph, p: &PropertyOracle, k: usize, budget: &Budget) -> Result<CoverDecision, ChromaticError> {
    let (tree, rest) = tree_split(g);
    let tree_options: Vec<Vec<(usize, usize)>> = (0u32..1 << k)
        .map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| (i, i)).collect())
        .collect();
    let rest_options = partial_matchings(k);
    let edges: Vec<((usize, usize), &Vec<Vec<(usize, usize)>>)> = tree
        .iter()
        .map(|&e| (e, &tree_options))
        .chain(rest.iter().map(|&e| (e, &rest_options)))
        .collect();
    let mut idx = vec![0usize; edges.len()];
    loop {
        budget.tick()?;
        let m = edges
            .iter()
            .zip(&idx)
            .map(|((e, opts), &i)| (*e, opts[i].clone()))
            .collect();
        let cover = Cover::new(g.clone(), vec![k; g.order()], m).expect("enumerated cover is valid");
        if find_p_transversal(&cover, p).is_none() {
            return Ok(CoverDecision::BadCover(cover));
        }
        let mut pos = 0;
        loop {
            if pos == edges.len() {
                return Ok(CoverDecision::AllCoverable);
            }
            idx[pos] += 1;
            if idx[pos] < edges[pos].1.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Least `k` such that every `k`-cover has a `P`-transversal. The witness
/// is a bad `(value - 1)`-cover.
pub fn chi_dp(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<ChromaticResult, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    let start = chi_with(g, p, limits)?.value;
    // the identity cover of a graph with no (start - 1)-colouring is bad
    let mut witness = if start > 0 {
        Witness::Cover(Cover::identity(g, start - 1))
    } else {
        Witness::None
    };
    let mut notes = Vec::new();
    for k in start..=g.order().max(start) {
        match dp_decide(g, p, k, &budget)? {
            CoverDecision::AllCoverable => {
                notes.push(format!("search nodes: {}", budget.used.get()));
                return Ok(ChromaticResult { value: k, witness, notes });
            }
            CoverDecision::BadCover(c) => witness = Witness::Cover(c),
        }
    }
    unreachable!("covers with fibers of size |G| always have a transversal")
}

/// Statistics of the bad covers among normalized perfect-matching covers.
#[derive(Clone, Debug, Serialize)]
pub struct BadCoverCensus {
    pub k: usize,
    pub non_tree_edges: usize,
    pub normalized_covers: u128,
    pub bad_covers: u128,
    /// Bad covers equivalent to the cover of constant lists.
    pub bad_list_covers: u128,
    pub first_non_list_bad_cover: Option<Cover>,
}

/// Counts bad `k`-covers among perfect-matching covers of a connected
/// graph, normalized on a spanning tree. Requires a monotone property.
pub fn bad_cover_census(g: &Graph, p: &PropertyOracle, k: usize, limits: &Limits) -> Result<BadCoverCensus, ChromaticError> {
    let budget = Budget::new(limits);
    budget.check_order(g)?;
    if !p.monotone || !p.hereditary || !g.is_connected() || k == 0 {
        return Err(ChromaticError::TooLarge(
            "census needs a connected graph, k >= 1 and a monotone hereditary property".into(),
        ));
    }
    let search = DpSearch::new(g, p, k, &budget)?;
    let mut out = Census::default();
    search.census(search.initial(), &mut Vec::new(), true, &mut out)?;
    Ok(BadCoverCensus {
        k,
        non_tree_edges: search.rest.len(),
        normalized_covers: (search.perms.len() as u128).pow(search.rest.len() as u32),
        bad_covers: out.bad,
        bad_list_covers: out.bad_list,
        first_non_list_bad_cover: out.first_non_list.map(|a| search.cover(&a)),
    })
}

/// `chi_DP(G - v) = chi_DP(G) - 1` for every vertex `v`.
pub fn is_dp_critical(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<bool, ChromaticError> {
    let value = chi_dp(g, p, limits)?.value;
    if value == 0 {
        return Ok(true);
    }
    for v in 0..g.order() {
        let h = g.remove_vertex(v);
        // only need to know that h has no bad (value - 1)-cover
        let budget = Budget::new(limits);
        if matches!(dp_decide(&h, p, value - 1, &budget)?, CoverDecision::BadCover(_)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A smallest vertex set inducing a subgraph with the same `chi_DP`, and
/// that subgraph (which is critical).
pub fn critical_core(g: &Graph, p: &PropertyOracle, limits: &Limits) -> Result<(Vec<usize>, Graph), ChromaticError> {
    let target = chi_dp(g, p, limits)?.value;
    if target == 0 {
        return Ok((vec![], Graph::empty(0)));
    }
    let n = g.order();
    for size in 1..=n {
        for set in subsets(n, size) {
            let h = g.induced(&set);
            if !h.is_connected() {
                continue;
            }
            let budget = Budget::new(limits);
            if matches!(dp_decide(&h, p, target - 1, &budget)?, CoverDecision::BadCover(_)) {
                return Ok((set, h));
            }
        }
    }
    unreachable!("g itself has a bad (chi_DP - 1)-cover")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> PropertyOracle {
        PropertyOracle::edgeless()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&Graph::complete(4), &o()).unwrap().value, 4);
        assert_eq!(chi(&Graph::cycle(5), &o()).unwrap().value, 3);
        assert_eq!(chi(&Graph::complete(5), &PropertyOracle::degenerate(1)).unwrap().value, 3);
        assert_eq!(chi(&Graph::empty(0), &o()).unwrap().value, 0);
        let r = chi(&Graph::cycle(5), &o()).unwrap();
        let Witness::Coloring(c) = r.witness else { panic!() };
        assert!(o().validate_coloring(&Graph::cycle(5), &c));
        let big = Graph::path(11);
        assert!(matches!(chi(&big, &o()), Err(ChromaticError::TooLarge(_))));
    }

    #[test]
    fn list_examples() {
        let d = chi_list_decide(&Graph::cycle(3), &o(), 2, &lim()).unwrap();
        let ListDecision::BadLists(l) = d else { panic!() };
        assert_eq!(l, vec![vec![0, 1]; 3]);
        assert_eq!(chi_list_decide(&Graph::cycle(4), &o(), 2, &lim()).unwrap(), ListDecision::Choosable);
        assert_eq!(chi_list_decide(&Graph::complete(1), &o(), 1, &lim()).unwrap(), ListDecision::Choosable);
        // K_{2,3}... K_{2,4} is not 2-choosable
        let k24 = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let ListDecision::BadLists(l) = chi_list_decide(&k24, &o(), 2, &lim()).unwrap() else {
            panic!("K_2,4 is not 2-choosable")
        };
        assert!(list_coloring(&k24, &o(), &l).is_none());
        assert_eq!(chi_list(&k24, &o(), &lim()).unwrap().value, 3);
    }

    #[test]
    fn dp_decide_examples() {
        let CoverDecision::BadCover(c) = chi_dp_decide(&Graph::cycle(4), &o(), 2, &lim()).unwrap() else {
            panic!()
        };
        assert!(find_p_transversal(&c, &o()).is_none());
        assert_eq!(chi_dp_decide(&Graph::complete(3), &o(), 3, &lim()).unwrap(), CoverDecision::AllCoverable);
        assert_eq!(chi_dp_decide(&Graph::complete(2), &o(), 2, &lim()).unwrap(), CoverDecision::AllCoverable);
    }

    #[test]
    fn dp_values() {
        assert_eq!(chi_dp(&Graph::cycle(4), &o(), &lim()).unwrap().value, 3);
        assert_eq!(chi_dp(&Graph::complete(4), &o(), &lim()).unwrap().value, 4);
        let r = chi_dp(&Graph::complete(5), &PropertyOracle::degenerate(1), &lim()).unwrap();
        assert_eq!(r.value, 3);
        let Witness::Cover(c) = r.witness else { panic!() };
        assert_eq!(c.min_fiber(), 2);
        assert!(find_p_transversal(&c, &PropertyOracle::degenerate(1)).is_none());
    }

    #[test]
    fn criticality() {
        assert!(is_dp_critical(&Graph::complete(4), &o(), &lim()).unwrap());
        assert!(is_dp_critical(&Graph::cycle(4), &o(), &lim()).unwrap());
        assert!(!is_dp_critical(&Graph::path(3), &o(), &lim()).unwrap());
        let k4_pendant = Graph::complete(4).disjoint_union(&Graph::empty(1)).with_edges(&[(3, 4)]).unwrap();
        let (set, core) = critical_core(&k4_pendant, &o(), &lim()).unwrap();
        assert_eq!(set, vec![0, 1, 2, 3]);
        assert_eq!(core, Graph::complete(4));
        assert_eq!(critical_core(&Graph::cycle(5), &o(), &lim()).unwrap().1, Graph::cycle(5));
        assert_eq!(critical_core(&Graph::empty(3), &o(), &lim()).unwrap().1, Graph::empty(1));
    }

    #[test]
    fn cycle_type_reps() {
        assert_eq!(cycle_type_representatives(3).len(), 3);
        assert_eq!(cycle_type_representatives(4).len(), 5);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(partial_matchings(2).len(), 7);
        assert_eq!(canonical_lists(0, 2), vec![vec![0, 1]]);
        assert_eq!(canonical_lists(2, 2).len(), 1 + 2 + 1);
    }
}
