//! Configurations `(G, X, H, f)`: a cover together with a non-negative
//! integer `f(x)` on every vertex of `H`, and the search for a transversal
//! `T` such that `H[T]` is strictly f-degenerate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{Cover, CoverError, CoverJson, FiberSearch, JsonInputError, Transversal};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("vertex {0} separates the base graph; reduction needs a non-separating vertex")]
    ReductionUnsound(usize),
    #[error("pivot ({v}, {i}) has f = 0")]
    InvalidPivot { v: usize, i: usize },
    #[error("missing f entry \"{0}\"")]
    MissingF(String),
    #[error("f entry \"{0}\" does not name a cover vertex")]
    BadFKey(String),
    #[error("f must give one value per fiber vertex")]
    FShape,
    #[error("search engines disagree: exhaustive says {exhaustive}, reduction says {reduction}")]
    EngineDisagreement { exhaustive: bool, reduction: bool },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    cover: Cover,
    f: Vec<Vec<u32>>,
}

/// Peels `set` (a set of base vertices, one chosen `H`-vertex each) by
/// removing vertices whose degree in what is left is below `fval`.
/// True when everything goes.
pub(crate) fn peels_away(adj: &[u64], set: u64, fval: impl Fn(usize) -> u32) -> bool {
    let mut left = set;
    loop {
        let mut progressed = false;
        let mut rest = left;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (adj[v] & left).count_ones() < fval(v) {
                left &= !(1 << v);
                progressed = true;
            }
        }
        if left == 0 {
            return true;
        }
        if !progressed {
            return false;
        }
    }
}

impl Configuration {
    pub fn new(cover: Cover, f: Vec<Vec<u32>>) -> Result<Self, ConfigError> {
        if f.len() != cover.base().order()
            || f.iter().enumerate().any(|(v, fv)| fv.len() != cover.fiber_size(v))
        {
            return Err(ConfigError::FShape);
        }
        Ok(Configuration { cover, f })
    }

    /// Uniform `f` on every fiber vertex.
    pub fn constant(cover: Cover, value: u32) -> Self {
        let f = cover.fibers().iter().map(|&s| vec![value; s]).collect();
        Configuration { cover, f }
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn base(&self) -> &Graph {
        self.cover.base()
    }

    pub fn f(&self, v: usize, i: usize) -> u32 {
        self.f[v][i]
    }

    pub fn f_fiber(&self, v: usize) -> &[u32] {
        &self.f[v]
    }

    pub fn f_values(&self) -> &[Vec<u32>] {
        &self.f
    }

    pub fn fiber_sum(&self, v: usize) -> u32 {
        self.f[v].iter().sum()
    }

    /// Peeling test for an arbitrary set `t` of `H`-vertices `(v, i)`:
    /// repeatedly delete the lowest-address vertex whose current degree is
    /// below its `f`; strictly f-degenerate iff this empties the set.
    pub fn is_strictly_f_degenerate(&self, t: &[(usize, usize)]) -> bool {
        let mut t = t.to_vec();
        t.sort_unstable();
        t.dedup();
        let m = t.len();
        let adj: Vec<Vec<usize>> = (0..m)
            .map(|a| {
                let (v, i) = t[a];
                (0..m)
                    .filter(|&b| {
                        let (w, j) = t[b];
                        w != v && self.cover.mate(v, i, w) == Some(j)
                    })
                    .collect()
            })
            .collect();
        let mut alive = vec![true; m];
        let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut left = m;
        'outer: while left > 0 {
            for a in 0..m {
                let (v, i) = t[a];
                if alive[a] && (deg[a] as u64) < self.f[v][i] as u64 {
                    alive[a] = false;
                    left -= 1;
                    for &b in &adj[a] {
                        deg[b] -= 1;
                    }
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Checks a transversal given as one fiber index per base vertex.
    pub fn is_solution(&self, t: &Transversal) -> bool {
        let choice: Vec<Option<usize>> = t.choice.iter().copied().map(Some).collect();
        if t.choice.len() != self.base().order() {
            return false;
        }
        let adj = self.cover.induced_masks(&choice);
        let set = full_mask(self.base().order());
        peels_away(&adj, set, |v| self.f[v][t.choice[v]])
    }

    pub fn is_degree_feasible(&self) -> bool {
        (0..self.base().order()).all(|v| self.fiber_sum(v) as usize >= self.base().degree(v))
    }

    /// Pads every fiber to the largest fiber size with isolated vertices
    /// carrying `f = 0`.
    pub fn normalize(&self) -> Configuration {
        let s = self.cover.max_fiber().max(1);
        let cover = self.cover.padded(s);
        let f = self
            .f
            .iter()
            .map(|fv| {
                let mut fv = fv.clone();
                fv.resize(s, 0);
                fv
            })
            .collect();
        Configuration { cover, f }
    }

    pub fn is_normalized(&self) -> bool {
        let s = self.cover.max_fiber();
        s >= 1 && self.cover.fibers().iter().all(|&x| x == s)
    }

    /// `(G, X, H, f) / (v, x)`: deletes `v` and its fiber, lowering `f` by
    /// one (not below zero) on the `H`-neighbours of `x = (v, i)`. Base
    /// vertices above `v` shift down by one.
    pub fn reduce(&self, v: usize, i: usize) -> Result<Configuration, ConfigError> {
        if self.f[v][i] == 0 {
            return Err(ConfigError::InvalidPivot { v, i });
        }
        if self.base().is_separating(v) {
            return Err(ConfigError::ReductionUnsound(v));
        }
        Ok(self.reduce_unchecked(v, i))
    }

    fn reduce_unchecked(&self, v: usize, i: usize) -> Configuration {
        let n = self.base().order();
        let keep: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        let cover = self.cover.restrict(&keep);
        let mut f: Vec<Vec<u32>> = keep.iter().map(|&u| self.f[u].clone()).collect();
        for (w, j) in self.cover.h_neighbors(v, i) {
            let w2 = if w > v { w - 1 } else { w };
            f[w2][j] = f[w2][j].saturating_sub(1);
        }
        Configuration { cover, f }
    }

    /// Deletes the fiber of `u` without touching `f`.
    pub fn delete_vertex(&self, u: usize) -> Configuration {
        let keep: Vec<usize> = (0..self.base().order()).filter(|&w| w != u).collect();
        self.restrict(&keep)
    }

    /// The configuration induced on `vertices` with `f` unchanged.
    pub fn restrict(&self, vertices: &[usize]) -> Configuration {
        Configuration {
            cover: self.cover.restrict(vertices),
            f: vertices.iter().map(|&w| self.f[w].clone()).collect(),
        }
    }

    /// Exhaustive search. Fiber vertices with `f = 0` are never chosen
    /// (the singleton `{x}` already fails peeling) and a branch is cut as
    /// soon as the chosen set fails to peel away: adding vertices never
    /// removes edges among those already chosen, so the failure persists.
    pub fn solve(&self) -> Option<Transversal> {
        let n = self.base().order();
        if n == 0 {
            return Some(Transversal { choice: vec![] });
        }
        FiberSearch::new(&self.cover, None)
            .run_with_choice(
                |v, i| self.f[v][i] > 0,
                |adj, set, choice| peels_away(adj, set, |w| self.f[w][choice[w].unwrap()]),
            )
            .map(|t| t.to_total().expect("search returns a total transversal"))
    }

    pub fn is_colorable(&self) -> bool {
        self.solve().is_some()
    }

    /// Reduction-guided search: on a connected degree-feasible
    /// configuration, reduce at a non-separating vertex of largest degree,
    /// solve the smaller configuration the same way and add the pivot
    /// back (a solution `T'` of `C/(v, x)` extends to the solution
    /// `T' + x` of `C`). Falls back to [`Configuration::solve`] whenever no
    /// pivot choice leads anywhere.
    pub fn solve_by_reduction(&self) -> Option<Transversal> {
        let g = self.base();
        let n = g.order();
        if n == 0 || !g.is_connected() || !self.is_degree_feasible() {
            return self.solve();
        }
        if n == 1 {
            return (0..self.cover.fiber_size(0))
                .find(|&i| self.f[0][i] > 0)
                .map(|i| Transversal { choice: vec![i] });
        }
        let v = (0..n)
            .filter(|&u| !g.is_separating(u))
            .max_by_key(|&u| (g.degree(u), std::cmp::Reverse(u)))
            .expect("a connected graph has a non-separating vertex");
        for i in 0..self.cover.fiber_size(v) {
            if self.f[v][i] == 0 {
                continue;
            }
            if let Some(t) = self.reduce_unchecked(v, i).solve_by_reduction() {
                let mut choice = t.choice;
                choice.insert(v, i);
                let lifted = Transversal { choice };
                debug_assert!(self.is_solution(&lifted), "lifting a reduced solution failed");
                return Some(lifted);
            }
        }
        self.solve()
    }

    /// Runs both engines and insists on the same verdict.
    pub fn solve_cross_checked(&self) -> Result<Option<Transversal>, ConfigError> {
        let exhaustive = self.solve();
        let reduction = self.solve_by_reduction();
        if exhaustive.is_some() != reduction.is_some() {
            return Err(ConfigError::EngineDisagreement {
                exhaustive: exhaustive.is_some(),
                reduction: reduction.is_some(),
            });
        }
        if let Some(t) = &reduction {
            if !self.is_solution(t) {
                return Err(ConfigError::EngineDisagreement {
                    exhaustive: exhaustive.is_some(),
                    reduction: false,
                });
            }
        }
        Ok(exhaustive)
    }

    /// Renumbers base vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Configuration {
        let n = self.base().order();
        let mut inv = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        self.restrict(&inv)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// ---------------------------------------------------------------------------
// JSON form: the cover format plus "f": {"v:i": value}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    #[serde(flatten)]
    cover: CoverJson,
    f: BTreeMap<String, u32>,
}

fn parse_f_key(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(':')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl TryFrom<ConfigJson> for Configuration {
    type Error = ConfigError;

    fn try_from(j: ConfigJson) -> Result<Self, ConfigError> {
        let cover = Cover::try_from(j.cover)?;
        let mut f: Vec<Vec<Option<u32>>> = cover.fibers().iter().map(|&s| vec![None; s]).collect();
        for (key, value) in &j.f {
            match parse_f_key(key) {
                Some((v, i)) if v < f.len() && i < f[v].len() => f[v][i] = Some(*value),
                _ => return Err(ConfigError::BadFKey(key.clone())),
            }
        }
        let mut full = Vec::with_capacity(f.len());
        for (v, fv) in f.into_iter().enumerate() {
            let mut row = Vec::with_capacity(fv.len());
            for (i, x) in fv.into_iter().enumerate() {
                row.push(x.ok_or_else(|| ConfigError::MissingF(format!("{v}:{i}")))?);
            }
            full.push(row);
        }
        Configuration::new(cover, full)
    }
}

impl Configuration {
    pub fn from_json(text: &str) -> Result<Configuration, JsonInputError> {
        let j: ConfigJson = serde_json::from_str(text)?;
        Configuration::try_from(j).map_err(|e| match e {
            ConfigError::Cover(c) => JsonInputError::Cover(c),
            other => JsonInputError::Config(other),
        })
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let f = self
            .f
            .iter()
            .enumerate()
            .flat_map(|(v, fv)| fv.iter().enumerate().map(move |(i, &x)| (format!("{v}:{i}"), x)))
            .collect();
        ConfigJson {
            cover: CoverJson::from(&self.cover),
            f,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ConfigJson::deserialize(d)?;
        Configuration::try_from(j).map_err(serde::de::Error::custom)
    }
}
