use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Blocks (maximal 2-connected pieces, bridges, isolated vertices) and the
/// separating vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Each block as a sorted vertex list; blocks are sorted.
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: BTreeSet<usize>,
}

impl BlockDecomposition {
    /// Indices of the blocks containing `v`.
    pub fn blocks_of(&self, v: usize) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.binary_search(&v).is_ok())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Biconnected-component decomposition (iterative Hopcroft–Tarjan).
pub fn block_decomposition(g: &Graph) -> BlockDecomposition {
    let n = g.order();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut cut = BTreeSet::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root] = time;
            time += 1;
            blocks.push(vec![root]);
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
            if *pos < g.degree(u) {
                let w = g.neighbors(u)[*pos];
                *pos += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        if p != root {
                            cut.insert(p);
                        }
                        let mut block = BTreeSet::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (p, u) {
                                break;
                            }
                        }
                        blocks.push(block.into_iter().collect());
                    }
                }
            }
        }
        if root_children >= 2 {
            cut.insert(root);
        }
    }
    blocks.sort();
    BlockDecomposition {
        blocks,
        cut_vertices: cut,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    Complete,
    Cycle,
    Other {
        max_degree: usize,
        regular_degree: Option<usize>,
    },
}

/// Classifies the subgraph induced by `block`. Complete graphs take
/// precedence, so `K_3` is reported as `Complete`.
pub fn classify_block(g: &Graph, block: &[usize]) -> BlockKind {
    let b = g.induced(block);
    if b.is_complete() {
        BlockKind::Complete
    } else if b.is_cycle() {
        BlockKind::Cycle
    } else {
        BlockKind::Other {
            max_degree: b.max_degree(),
            regular_degree: b.regular_degree(),
        }
    }
}
