//! Constructible configurations: the three block patterns (M), (K), (C),
//! merging at a vertex, and recognition of configurations built this way.
//!
//! A configuration on a connected graph is constructible exactly when each
//! block `B` carries a configuration `(B, X|B, H[X|B], f^B)` of one of the
//! three patterns and the `f^B` add up to `f` at every vertex. The
//! recognizer searches these splits at cut vertices.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, Configuration};
use crate::cover::Cover;
use crate::graph::{block_decomposition, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("the base graph is not a block")]
    NotABlock,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("cycle of order {n} does not have {twist:?} parity")]
    ParityMismatch { n: usize, twist: Twist },
    #[error("bad bijection: {0}")]
    BadBijection(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Twist {
    /// Positive part is two disjoint copies of the cycle.
    Odd,
    /// Positive part is one cycle of twice the length.
    Even,
}

/// (M): one positive vertex per fiber carrying the degree, and the positive
/// vertices span a copy of the block. `embedding[v]` is the positive index
/// in `X_v`.
pub fn build_m(g: &Graph, s: usize, embedding: &[usize]) -> Result<Configuration, ConstructError> {
    if !is_block(g) {
        return Err(ConstructError::NotABlock);
    }
    if s == 0 || embedding.len() != g.order() || embedding.iter().any(|&e| e >= s) {
        return Err(ConstructError::InvalidParameters(
            "need s >= 1 and one embedding index below s per vertex".into(),
        ));
    }
    let matchings = g
        .edges()
        .map(|(u, v)| ((u, v), vec![(embedding[u], embedding[v])]))
        .collect();
    let cover = Cover::new(g.clone(), vec![s; g.order()], matchings).map_err(ConfigError::from)?;
    let f = (0..g.order())
        .map(|v| {
            let mut fv = vec![0; s];
            fv[embedding[v]] = g.degree(v) as u32;
            fv
        })
        .collect();
    Ok(Configuration::new(cover, f)?)
}

/// (K) on `K_n`: slot `i` of every fiber carries `t[i]` (0 past the end of
/// `t`), and every edge matches slot `i` to slot `i`.
pub fn build_k(n: usize, t: &[u32], s: usize) -> Result<Configuration, ConstructError> {
    let total: u32 = t.iter().sum();
    if n == 0 || total as usize != n - 1 || t.contains(&0) {
        return Err(ConstructError::BadPartition(format!(
            "parts {t:?} must be positive and sum to {}",
            n.saturating_sub(1)
        )));
    }
    if s == 0 || t.len() > s {
        return Err(ConstructError::BadPartition(format!(
            "{} parts do not fit fibers of size {s}",
            t.len()
        )));
    }
    let g = Graph::complete(n);
    let matchings = g.edges().map(|e| (e, (0..s).map(|i| (i, i)).collect())).collect();
    let cover = Cover::new(g, vec![s; n], matchings).map_err(ConfigError::from)?;
    let mut row = t.to_vec();
    row.resize(s, 0);
    Ok(Configuration::new(cover, vec![row; n])?)
}

/// (C) on `C_n`: slots 0 and 1 carry `f = 1`. Every edge matches 0-0 and
/// 1-1, except that with [`Twist::Even`] the closing edge `(0, n-1)` is
/// crossed, which turns the two copies into one long cycle.
pub fn build_c(n: usize, s: usize, twist: Twist) -> Result<Configuration, ConstructError> {
    if n < 3 || s < 2 {
        return Err(ConstructError::InvalidParameters("need n >= 3 and s >= 2".into()));
    }
    let wanted = if n % 2 == 1 { Twist::Odd } else { Twist::Even };
    if twist != wanted {
        return Err(ConstructError::ParityMismatch { n, twist });
    }
    let g = Graph::cycle(n);
    let mut matchings: BTreeMap<_, _> = g.edges().map(|e| (e, vec![(0, 0), (1, 1)])).collect();
    if twist == Twist::Even {
        matchings.insert((0, n - 1), vec![(0, 1), (1, 0)]);
    }
    let cover = Cover::new(g, vec![s; n], matchings).map_err(ConfigError::from)?;
    let mut row = vec![0; s];
    row[0] = 1;
    row[1] = 1;
    Ok(Configuration::new(cover, vec![row; n])?)
}

/// Identifies `v1` of `c1` with `v2` of `c2`; `X_{v1}[i]` is glued to
/// `X_{v2}[bijection[i]]` and their `f` values add. The result keeps the
/// vertices of `c1` in place and appends those of `c2` other than `v2`,
/// in order.
pub fn merge(
    c1: &Configuration,
    v1: usize,
    c2: &Configuration,
    v2: usize,
    bijection: &[usize],
) -> Result<Configuration, ConstructError> {
    let (n1, n2) = (c1.base().order(), c2.base().order());
    if v1 >= n1 || v2 >= n2 {
        return Err(ConstructError::InvalidParameters("merge vertex out of range".into()));
    }
    let s = c1.cover().fiber_size(v1);
    if c2.cover().fiber_size(v2) != s || bijection.len() != s {
        return Err(ConstructError::BadBijection(format!(
            "fibers of sizes {s} and {} with a map of length {}",
            c2.cover().fiber_size(v2),
            bijection.len()
        )));
    }
    let mut inverse = vec![usize::MAX; s];
    for (i, &j) in bijection.iter().enumerate() {
        if j >= s || inverse[j] != usize::MAX {
            return Err(ConstructError::BadBijection(format!("{bijection:?} is not a permutation")));
        }
        inverse[j] = i;
    }
    let map2 = |w: usize| -> usize {
        match w.cmp(&v2) {
            std::cmp::Ordering::Equal => v1,
            std::cmp::Ordering::Less => n1 + w,
            std::cmp::Ordering::Greater => n1 + w - 1,
        }
    };
    let idx2 = |w: usize, j: usize| if w == v2 { inverse[j] } else { j };
    let n = n1 + n2 - 1;
    let mut edges: Vec<(usize, usize)> = c1.base().edges().collect();
    edges.extend(c2.base().edges().map(|(a, b)| (map2(a), map2(b))));
    let g = Graph::from_edges(n, &edges).expect("merged graph is simple");
    let mut fibers = c1.cover().fibers().to_vec();
    let mut f = c1.f_values().to_vec();
    for w in (0..n2).filter(|&w| w != v2) {
        fibers.push(c2.cover().fiber_size(w));
        f.push(c2.f_fiber(w).to_vec());
    }
    for (i, &j) in bijection.iter().enumerate() {
        f[v1][i] += c2.f(v2, j);
    }
    let mut matchings = c1.cover().matchings().clone();
    for (&(a, b), pairs) in c2.cover().matchings() {
        let mapped = pairs.iter().map(|&(i, j)| (idx2(a, i), idx2(b, j))).collect();
        matchings.insert((map2(a), map2(b)), mapped);
    }
    let cover = Cover::new(g, fibers, matchings).map_err(ConfigError::from)?;
    Ok(Configuration::new(cover, f)?)
}

fn is_block(g: &Graph) -> bool {
    g.order() >= 1 && g.is_connected() && block_decomposition(g).blocks.len() == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BlockTag {
    M,
    /// Part sizes and, per block vertex, the fiber ordering whose first
    /// `t.len()` entries form the complete slot graphs.
    K { t: Vec<u32>, orderings: Vec<Vec<usize>> },
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCert {
    /// Block vertices in the parent graph; local vertex `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    pub tag: BlockTag,
    /// `(B, X|B, H[X|B], f^B)` on local vertex numbers.
    pub config: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeStep {
    pub block: usize,
    /// Parent vertex where the block is glued on; `None` for the first block.
    pub at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructibleCert {
    pub blocks: Vec<BlockCert>,
    pub merge_tree: Vec<MergeStep>,
}

impl ConstructibleCert {
    /// Rebuilds the configuration by merging the block configurations in
    /// `merge_tree` order with identity bijections.
    pub fn replay(&self) -> Result<Configuration, ConstructError> {
        let first = &self.merge_tree[0];
        let b0 = &self.blocks[first.block];
        let mut current = b0.config.clone();
        let mut global: Vec<usize> = b0.vertices.clone();
        for step in &self.merge_tree[1..] {
            let b = &self.blocks[step.block];
            let at = step.at.ok_or_else(|| {
                ConstructError::InvalidParameters("merge step without a vertex".into())
            })?;
            let here = global.iter().position(|&g| g == at);
            let there = b.vertices.iter().position(|&g| g == at);
            let (Some(here), Some(there)) = (here, there) else {
                return Err(ConstructError::InvalidParameters(format!("vertex {at} not shared")));
            };
            let s = b.config.cover().fiber_size(there);
            let identity: Vec<usize> = (0..s).collect();
            current = merge(&current, here, &b.config, there, &identity)?;
            global.extend(b.vertices.iter().copied().filter(|&g| g != at));
        }
        Ok(current.relabel(&global))
    }

    /// Checks that the certificate is internally consistent and rebuilds `c`.
    pub fn verify(&self, c: &Configuration) -> bool {
        let patterns_ok = self
            .blocks
            .iter()
            .all(|b| match_pattern(&BlockInfo::new(b.config.cover()), b.config.f_values()).is_some());
        patterns_ok && self.replay().map(|r| &r == c).unwrap_or(false)
    }
}

struct BlockInfo {
    cover: Cover,
    complete: bool,
    cycle: bool,
}

impl BlockInfo {
    fn new(cover: &Cover) -> Self {
        let g = cover.base();
        BlockInfo {
            complete: g.is_complete(),
            cycle: g.is_cycle(),
            cover: cover.clone(),
        }
    }
}

fn positives(fv: &[u32]) -> Vec<usize> {
    (0..fv.len()).filter(|&i| fv[i] > 0).collect()
}

fn match_m(b: &BlockInfo, f: &[Vec<u32>]) -> bool {
    let g = b.cover.base();
    if g.order() < 2 {
        return false;
    }
    let mut pos = Vec::with_capacity(g.order());
    for (v, fv) in f.iter().enumerate() {
        match positives(fv)[..] {
            [x] if fv[x] as usize == g.degree(v) => pos.push(x),
            _ => return false,
        }
    }
    g.edges().all(|(u, v)| b.cover.mate(u, pos[u], v) == Some(pos[v]))
}

fn match_k(b: &BlockInfo, f: &[Vec<u32>]) -> Option<BlockTag> {
    if !b.complete {
        return None;
    }
    let n = b.cover.base().order();
    let sorted = |fv: &[u32]| -> Vec<usize> {
        let mut p = positives(fv);
        p.sort_by_key(|&i| (std::cmp::Reverse(fv[i]), i));
        p
    };
    let base = sorted(&f[0]);
    let t: Vec<u32> = base.iter().map(|&i| f[0][i]).collect();
    if t.iter().sum::<u32>() as usize != n - 1 {
        return None;
    }
    // Slot i is forced: it must be the mate of the i-th positive of vertex 0.
    let mut slots = vec![base.clone()];
    for u in 1..n {
        if positives(&f[u]).len() != t.len() {
            return None;
        }
        let mut row = Vec::with_capacity(t.len());
        for (k, &x) in base.iter().enumerate() {
            let y = b.cover.mate(0, x, u)?;
            if f[u][y] != t[k] {
                return None;
            }
            row.push(y);
        }
        slots.push(row);
    }
    for u in 1..n {
        for w in u + 1..n {
            for k in 0..t.len() {
                if b.cover.mate(u, slots[u][k], w) != Some(slots[w][k]) {
                    return None;
                }
            }
        }
    }
    let orderings = slots
        .into_iter()
        .enumerate()
        .map(|(v, mut row)| {
            row.extend((0..f[v].len()).filter(|&i| f[v][i] == 0));
            row
        })
        .collect();
    Some(BlockTag::K { t, orderings })
}

fn match_c(b: &BlockInfo, f: &[Vec<u32>]) -> bool {
    if !b.cycle {
        return false;
    }
    let g = b.cover.base();
    let n = g.order();
    for fv in f {
        let p = positives(fv);
        if p.len() != 2 || p.iter().any(|&i| fv[i] != 1) {
            return false;
        }
    }
    let is_pos = |(w, j): (usize, usize)| f[w][j] > 0;
    // every positive vertex needs exactly two positive neighbours
    let mut nodes = Vec::new();
    for v in 0..n {
        for i in positives(&f[v]) {
            if b.cover.h_neighbors(v, i).into_iter().filter(|&y| is_pos(y)).count() != 2 {
                return false;
            }
            nodes.push((v, i));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut components = 0;
    for &start in &nodes {
        if !seen.insert(start) {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        while let Some((v, i)) = stack.pop() {
            for y in b.cover.h_neighbors(v, i) {
                if is_pos(y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    components == if n % 2 == 1 { 2 } else { 1 }
}

fn match_pattern(b: &BlockInfo, f: &[Vec<u32>]) -> Option<BlockTag> {
    if match_m(b, f) {
        return Some(BlockTag::M);
    }
    if let Some(tag) = match_k(b, f) {
        return Some(tag);
    }
    match_c(b, f).then_some(BlockTag::C)
}

/// Recognizer for a fixed cover; the block structure is computed once and
/// reused for every `f`.
pub struct Recognizer {
    normalized: Cover,
    blocks: Vec<Vec<usize>>,
    infos: Vec<BlockInfo>,
    merge_tree: Vec<MergeStep>,
    /// For each block in merge order, which of its vertices are cut vertices
    /// and whether this is the last block (in merge order) containing them.
    cut_roles: Vec<Vec<(usize, bool)>>,
    connected: bool,
}

impl Recognizer {
    pub fn new(cover: &Cover) -> Self {
        let normalized = cover.padded(cover.max_fiber().max(1));
        let g = normalized.base();
        let connected = g.order() >= 1 && g.is_connected();
        let dec = block_decomposition(g);
        let blocks = dec.blocks.clone();
        let infos = blocks.iter().map(|b| BlockInfo::new(&normalized.restrict(b))).collect();
        // breadth-first over the block-cut tree from block 0
        let mut merge_tree = Vec::new();
        let mut used = vec![false; blocks.len()];
        let mut covered = vec![false; g.order()];
        if connected {
            merge_tree.push(MergeStep { block: 0, at: None });
            used[0] = true;
            for &v in &blocks[0] {
                covered[v] = true;
            }
            while merge_tree.len() < blocks.len() {
                let (k, at) = (0..blocks.len())
                    .filter(|&k| !used[k])
                    .find_map(|k| blocks[k].iter().find(|&&v| covered[v]).map(|&v| (k, v)))
                    .expect("blocks of a connected graph form a tree");
                used[k] = true;
                for &v in &blocks[k] {
                    covered[v] = true;
                }
                merge_tree.push(MergeStep { block: k, at: Some(at) });
            }
        }
        let mut cut_roles = Vec::new();
        for (pos, step) in merge_tree.iter().enumerate() {
            let roles = blocks[step.block]
                .iter()
                .enumerate()
                .filter(|&(_, v)| dec.cut_vertices.contains(v))
                .map(|(local, v)| {
                    let later = merge_tree[pos + 1..]
                        .iter()
                        .any(|s| blocks[s.block].binary_search(v).is_ok());
                    (local, !later)
                })
                .collect();
            cut_roles.push(roles);
        }
        Recognizer {
            normalized,
            blocks,
            infos,
            merge_tree,
            cut_roles,
            connected,
        }
    }

    /// Recognizes `(G, X, H, f)` for this cover. `f` may be given on the
    /// unpadded fibers; missing entries count as 0.
    pub fn recognize(&self, f: &[Vec<u32>]) -> Option<ConstructibleCert> {
        let g = self.normalized.base();
        if !self.connected || f.len() != g.order() {
            return None;
        }
        let s = self.normalized.max_fiber();
        let f: Vec<Vec<u32>> = f
            .iter()
            .map(|fv| {
                let mut fv = fv.clone();
                fv.resize(s, 0);
                fv
            })
            .collect();
        if (0..g.order()).any(|v| f[v].iter().sum::<u32>() as usize != g.degree(v)) {
            return None;
        }
        let mut residual = f.clone();
        let mut chosen: Vec<Option<(BlockTag, Vec<Vec<u32>>)>> = vec![None; self.blocks.len()];
        if !self.search(0, &f, &mut residual, &mut chosen) {
            return None;
        }
        let blocks = chosen
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let (tag, fb) = c.expect("every block assigned");
                BlockCert {
                    vertices: self.blocks[k].clone(),
                    tag,
                    config: Configuration::new(self.infos[k].cover.clone(), fb)
                        .expect("block f has the block's shape"),
                }
            })
            .collect();
        Some(ConstructibleCert {
            blocks,
            merge_tree: self.merge_tree.clone(),
        })
    }

    fn search(
        &self,
        pos: usize,
        f: &[Vec<u32>],
        residual: &mut Vec<Vec<u32>>,
        chosen: &mut Vec<Option<(BlockTag, Vec<Vec<u32>>)>>,
    ) -> bool {
        if pos == self.merge_tree.len() {
            return true;
        }
        let k = self.merge_tree[pos].block;
        let block = &self.blocks[k];
        let info = &self.infos[k];
        let bg = info.cover.base();
        let mut fb: Vec<Vec<u32>> = block.iter().map(|&v| f[v].clone()).collect();
        let roles = &self.cut_roles[pos];
        for &(local, last) in roles {
            if last {
                let v = block[local];
                fb[local] = residual[v].clone();
                if fb[local].iter().sum::<u32>() as usize != bg.degree(local) {
                    return false;
                }
            }
        }
        let free: Vec<usize> = roles.iter().filter(|r| !r.1).map(|r| r.0).collect();
        self.split(pos, 0, &free, &mut fb, f, residual, chosen)
    }

    /// Enumerates the block's share at each non-final cut vertex: vectors
    /// bounded by what is left there and summing to the block degree.
    #[allow(clippy::too_many_arguments)]
    fn split(
        &self,
        pos: usize,
        idx: usize,
        free: &[usize],
        fb: &mut Vec<Vec<u32>>,
        f: &[Vec<u32>],
        residual: &mut Vec<Vec<u32>>,
        chosen: &mut Vec<Option<(BlockTag, Vec<Vec<u32>>)>>,
    ) -> bool {
        let k = self.merge_tree[pos].block;
        let block = &self.blocks[k];
        if idx == free.len() {
            let Some(tag) = match_pattern(&self.infos[k], fb) else {
                return false;
            };
            for &(local, _) in &self.cut_roles[pos] {
                let v = block[local];
                for (r, x) in residual[v].iter_mut().zip(&fb[local]) {
                    *r -= x;
                }
            }
            chosen[k] = Some((tag, fb.clone()));
            if self.search(pos + 1, f, residual, chosen) {
                return true;
            }
            chosen[k] = None;
            for &(local, _) in &self.cut_roles[pos] {
                let v = block[local];
                for (r, x) in residual[v].iter_mut().zip(&fb[local]) {
                    *r += x;
                }
            }
            return false;
        }
        let local = free[idx];
        let v = block[local];
        let degree = self.infos[k].cover.base().degree(local) as u32;
        let cap = residual[v].clone();
        let mut share = vec![0u32; cap.len()];
        // odometer over share <= cap with the right total
        loop {
            if share.iter().sum::<u32>() == degree {
                fb[local] = share.clone();
                if self.split(pos, idx + 1, free, fb, f, residual, chosen) {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == share.len() {
                    return false;
                }
                if share[i] < cap[i] {
                    share[i] += 1;
                    break;
                }
                share[i] = 0;
                i += 1;
            }
        }
    }
}

/// Recognizes a constructible configuration and returns a certificate.
/// Disconnected base graphs are never recognized.
pub fn is_constructible(c: &Configuration) -> Option<ConstructibleCert> {
    Recognizer::new(c.cover()).recognize(c.f_values())
}
