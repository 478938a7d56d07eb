//! Exhaustive generation of small graphs up to isomorphism.

use std::collections::BTreeSet;

use super::Graph;

fn pair_bit(i: usize, j: usize) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (j * (j - 1) / 2 + i) as u32
}

/// Canonical upper-triangle bitmask: the minimum over all relabellings that
/// list vertices by non-increasing degree. Isomorphic graphs of the same
/// order get equal forms. Intended for order at most 10.
pub fn canonical_form(g: &Graph) -> u64 {
    let n = g.order();
    assert!(n <= 11, "canonical_form is brute force; order {n} too large");
    let mut target: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut pos = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut best = u64::MAX;
    fn rec(
        k: usize,
        g: &Graph,
        target: &[usize],
        edges: &[(usize, usize)],
        pos: &mut [usize],
        used: &mut [bool],
        best: &mut u64,
    ) {
        let n = g.order();
        if k == n {
            let m = edges
                .iter()
                .fold(0u64, |m, &(u, v)| m | 1 << pair_bit(pos[u], pos[v]));
            *best = (*best).min(m);
            return;
        }
        for v in 0..n {
            if !used[v] && g.degree(v) == target[k] {
                used[v] = true;
                pos[v] = k;
                rec(k + 1, g, target, edges, pos, used, best);
                used[v] = false;
            }
        }
    }
    rec(0, g, &target, &edges, &mut pos, &mut used, &mut best);
    if n < 2 {
        0
    } else {
        best
    }
}

fn from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_bit(i, j) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("mask graph is valid")
}

/// One representative of every isomorphism class of graphs of order `n`,
/// ordered by canonical form.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut classes: BTreeSet<u64> = BTreeSet::new();
    if n == 0 {
        return vec![Graph::empty(0)];
    }
    if n == 1 {
        return vec![Graph::empty(1)];
    }
    for base in all_graphs(n - 1) {
        let old: Vec<(usize, usize)> = base.edges().collect();
        for subset in 0u64..(1 << (n - 1)) {
            let mut edges = old.clone();
            edges.extend((0..n - 1).filter(|&u| subset >> u & 1 == 1).map(|u| (u, n - 1)));
            let g = Graph::from_edges(n, &edges).unwrap();
            classes.insert(canonical_form(&g));
        }
    }
    classes.into_iter().map(|m| from_mask(n, m)).collect()
}

/// Connected graphs of order `n` up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let all: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156]);
        let conn: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(conn, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn canonical_form_is_invariant() {
        let c5 = Graph::cycle(5);
        let relabelled = c5.induced(&[3, 0, 4, 1, 2]);
        assert_eq!(canonical_form(&c5), canonical_form(&relabelled));
        assert_ne!(canonical_form(&c5), canonical_form(&Graph::path(5)));
    }
}
