//! Bipartite incidence-graph combinatorics: sunflowers, low-degree
//! witnesses and `K_{a,b}`-freeness.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::{Budget, Formula};

/// Bipartite graph `(A, B, E)` stored as sorted left adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bigraph {
    n_right: usize,
    adj: Vec<Vec<u32>>,
}

impl Bigraph {
    /// Sorts and deduplicates every list; panics on an out-of-range neighbor.
    pub fn new(n_right: usize, mut adj: Vec<Vec<u32>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            if let Some(&last) = list.last() {
                assert!((last as usize) < n_right, "neighbor {last} >= n_right {n_right}");
            }
        }
        Bigraph { n_right, adj }
    }

    pub fn n_left(&self) -> usize {
        self.adj.len()
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn neighbors(&self, left: usize) -> &[u32] {
        &self.adj[left]
    }

    pub fn degree(&self, left: usize) -> usize {
        self.adj[left].len()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn max_left_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn right_adjacency(&self) -> Vec<Vec<u32>> {
        let mut right = vec![Vec::new(); self.n_right];
        for (x, list) in self.adj.iter().enumerate() {
            for &r in list {
                right[r as usize].push(x as u32);
            }
        }
        right
    }

    pub fn add_edge(&mut self, left: usize, right: u32) {
        assert!((right as usize) < self.n_right);
        if let Err(pos) = self.adj[left].binary_search(&right) {
            self.adj[left].insert(pos, right);
        }
    }
}

/// Left vertices whose neighborhoods pairwise intersect in exactly `core`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sunflower {
    pub petals: Vec<usize>,
    pub core: Vec<u32>,
}

impl Sunflower {
    /// Direct pairwise check of the core property.
    pub fn is_valid_in(&self, g: &Bigraph) -> bool {
        let distinct = self.petals.windows(2).all(|w| w[0] < w[1]);
        distinct
            && self.petals.iter().all(|&p| p < g.n_left())
            && self.petals.iter().enumerate().all(|(i, &u)| {
                self.petals[i + 1..]
                    .iter()
                    .all(|&v| intersect(g.neighbors(u), g.neighbors(v)) == self.core)
            })
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Finds a sunflower with at least `w` petals.
///
/// Greedily collects a maximal set `T` of left vertices with pairwise
/// disjoint neighborhoods (ascending id). If `|T| >= w` its first `w`
/// members form a sunflower with empty core. Otherwise some right vertex
/// `u` in `N(T)` is adjacent to many left vertices; the search recurses into
/// `N(u)` with `u` removed from the right side and adds `u` to the core.
/// On a `K_{a,b}`-free graph with left degrees at most `l` and
/// `|A| >= a((w-1)l)^b` this always succeeds, except in the corner
/// `a = 1, l = 1` where the threshold can fall below `w`.
pub fn find_sunflower(g: &Bigraph, w: usize) -> Option<Sunflower> {
    assert!(w >= 1, "sunflower size must be positive");
    let all: Vec<usize> = (0..g.n_left()).collect();
    let mut removed = vec![false; g.n_right()];
    let mut core = Vec::new();
    let petals = sunflower_in(g, &all, &mut removed, &mut core, w)?;
    core.sort_unstable();
    Some(Sunflower { petals, core })
}

fn sunflower_in(
    g: &Bigraph,
    left: &[usize],
    removed: &mut [bool],
    core: &mut Vec<u32>,
    w: usize,
) -> Option<Vec<usize>> {
    let live = |x: usize| g.neighbors(x).iter().copied().filter(|&r| !removed[r as usize]);

    // Right vertices already in N(T).
    let mut covered = vec![false; g.n_right()];
    let mut t = Vec::new();
    for &x in left {
        if live(x).all(|r| !covered[r as usize]) {
            for r in live(x) {
                covered[r as usize] = true;
            }
            t.push(x);
            if t.len() == w {
                return Some(t);
            }
        }
    }

    // Every left vertex with a live neighbor meets N(T); pick the busiest u.
    let mut load: HashMap<u32, usize> = HashMap::new();
    for &x in left {
        for r in live(x) {
            if covered[r as usize] {
                *load.entry(r).or_insert(0) += 1;
            }
        }
    }
    let (&u, &count) = load
        .iter()
        .max_by(|(r1, c1), (r2, c2)| c1.cmp(c2).then(r2.cmp(r1)))?;
    if count < w {
        return None;
    }
    let sub: Vec<usize> = left
        .iter()
        .copied()
        .filter(|&x| g.neighbors(x).binary_search(&u).is_ok())
        .collect();
    removed[u as usize] = true;
    core.push(u);
    sunflower_in(g, &sub, removed, core, w)
}

/// Smallest-id left vertex of degree at most `d`.
pub fn find_low_degree_left(g: &Bigraph, d: usize) -> Option<usize> {
    (0..g.n_left()).find(|&x| g.degree(x) <= d)
}

/// Whether no `b` right vertices share `a` common left neighbors.
///
/// Counts either the `b`-subsets of left neighborhoods or the `a`-subsets
/// of right neighborhoods, whichever is fewer; `budget` caps that count.
pub fn is_kab_free(g: &Bigraph, a: usize, b: usize, budget: Budget) -> Result<bool> {
    if b == 0 {
        return Ok(g.n_left() < a);
    }
    if a == 0 {
        return Ok(g.n_right() < b);
    }
    let right = g.right_adjacency();
    let left_cost: u128 = g.adj.iter().map(|l| binom(l.len(), b)).sum();
    let right_cost: u128 = right.iter().map(|l| binom(l.len(), a)).sum();
    budget.check(left_cost.min(right_cost))?;
    let found = if left_cost <= right_cost {
        has_popular_subset(g.adj.iter().map(|l| (l.as_slice(), 1)), b, a as u64)
    } else {
        has_popular_subset(right.iter().map(|l| (l.as_slice(), 1)), a, b as u64)
    };
    Ok(!found)
}

/// `K_{a,b}`-freeness of the incidence graph of `phi`, computed without
/// expanding clause copies: some `a` variables co-occurring in `b` clause
/// copies is exactly a `K_{a,b}`.
pub fn formula_is_kab_free(phi: &Formula, a: usize, b: usize) -> bool {
    if b == 0 {
        return phi.n_vars() < a;
    }
    if a == 0 {
        return phi.mass() < b as u64;
    }
    let lists: Vec<(Vec<u32>, u64)> = phi
        .clauses()
        .map(|(c, m)| (c.vars().iter().map(|v| v.0).collect(), m))
        .collect();
    !has_popular_subset(lists.iter().map(|(l, m)| (l.as_slice(), *m)), a, b as u64)
}

/// Whether some `size`-subset appears inside sets of total weight `>= threshold`.
fn has_popular_subset<'a>(
    sets: impl Iterator<Item = (&'a [u32], u64)>,
    size: usize,
    threshold: u64,
) -> bool {
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut buf = Vec::with_capacity(size);
    for (set, weight) in sets {
        let mut hit = false;
        for_each_subset(set, size, 0, &mut buf, &mut |sub| {
            let c = counts.entry(sub.to_vec()).or_insert(0);
            *c += weight;
            if *c >= threshold {
                hit = true;
            }
        });
        if hit {
            return true;
        }
    }
    false
}

pub(crate) fn for_each_subset(
    items: &[u32],
    size: usize,
    start: usize,
    buf: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if buf.len() == size {
        f(buf);
        return;
    }
    let need = size - buf.len();
    for i in start..items.len() {
        if items.len() - i < need {
            break;
        }
        buf.push(items[i]);
        for_each_subset(items, size, i + 1, buf, f);
        buf.pop();
    }
}

pub(crate) fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// Incidence graph of `phi`: left vertices are variables, right vertices are
/// clause copies in clause order, then copy index.
pub fn incidence_graph(phi: &Formula) -> Bigraph {
    incidence_subgraph(phi, &(0..phi.n_vars()).map(Into::into).collect::<Vec<_>>())
}

/// Incidence graph restricted to the left vertices `vars` (left vertex `i`
/// is `vars[i]`); all clause copies stay on the right.
pub fn incidence_subgraph(phi: &Formula, vars: &[crate::VarId]) -> Bigraph {
    let mut slot = vec![None; phi.n_vars()];
    for (i, v) in vars.iter().enumerate() {
        slot[v.index()] = Some(i);
    }
    let mut adj = vec![Vec::new(); vars.len()];
    let mut next: u64 = 0;
    for (c, m) in phi.clauses() {
        for v in c.vars() {
            if let Some(i) = slot[v.index()] {
                adj[i].extend((next..next + m).map(|r| r as u32));
            }
        }
        next += m;
    }
    let n_right = usize::try_from(next).expect("too many clause copies");
    Bigraph { n_right, adj }
}
