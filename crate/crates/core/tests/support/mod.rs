//! Independent oracles and seeded corpora shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use kabsat::generate::{random_formula, rng_from_seed, GenSpec};
use kabsat::rational::{ratio, Rational};
use kabsat::{Formula, VarId};
use rand::Rng;

/// Direct clause-by-clause objective.
pub fn naive_val(phi: &Formula, y: &[usize]) -> u64 {
    let is_true = |v: VarId| y.contains(&v.index());
    phi.clauses()
        .filter(|(c, _)| c.pos().iter().any(|&v| is_true(v)) || c.neg().iter().any(|&v| !is_true(v)))
        .map(|(_, m)| m)
        .sum()
}

/// Every subset of `0..n` with at most `k` elements.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&x: &usize| x + 1);
            for v in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn naive_values(phi: &Formula, k: usize) -> Vec<(Vec<usize>, u64)> {
    subsets(phi.n_vars(), k)
        .into_iter()
        .map(|y| {
            let v = naive_val(phi, &y);
            (y, v)
        })
        .collect()
}

pub fn naive_opt(phi: &Formula, k: usize) -> u64 {
    subsets(phi.n_vars(), k)
        .iter()
        .map(|y| naive_val(phi, y))
        .max()
        .unwrap_or(0)
}

/// Some `a` variables share `b` clause copies?
pub fn naive_free(phi: &Formula, a: usize, b: usize) -> bool {
    let mut load: HashMap<Vec<usize>, u64> = HashMap::new();
    for (c, m) in phi.clauses() {
        let vars: Vec<usize> = c.vars().iter().map(|v| v.index()).collect();
        for s in subsets(vars.len(), a).into_iter().filter(|s| s.len() == a) {
            let key: Vec<usize> = s.iter().map(|&i| vars[i]).collect();
            *load.entry(key).or_insert(0) += m;
        }
    }
    load.values().all(|&l| l < b as u64)
}

#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub phi: Formula,
    pub k: usize,
    pub eps: Rational,
    pub a: usize,
    pub b: usize,
}

/// Desk-scale instances: `n <= 18`, at most 50 distinct clauses,
/// multiplicities at most 20, `k` in {2, 3, 4}, `eps` in {1/8, 1/5}.
pub fn main_corpus(a: usize, b: usize, count: usize, seed: u64) -> Vec<Case> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(6..=18);
            let mut spec = GenSpec::new(n, rng.gen_range(8..=50), a, b, rng.gen());
            spec.k = [2, 3, 4][i % 3];
            spec.eps = if (i / 3) % 2 == 0 { ratio(1, 8) } else { ratio(1, 5) };
            spec.max_width = rng.gen_range(1..=4);
            spec.neg_prob = rng.gen_range(0.1..0.7);
            spec.max_mult = 20;
            let phi = random_formula(&spec).expect("corpus generation");
            Case {
                label: format!("main a={a} b={b} #{i} seed={}", spec.seed),
                phi,
                k: spec.k,
                eps: spec.eps,
                a,
                b,
            }
        })
        .collect()
}

/// Many positive variables with `a` in {2, 3}, `b = 1`, so the keep count of
/// the positive-variable stage is small enough to be exceeded. Half the
/// instances use heavy multiplicities.
pub fn positive_stress_corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|i| {
            let a = 2 + i % 2;
            let k = 1 + (i / 2) % 2;
            let eps = ratio(1, 5);
            // keep count q = k + ceil(a * (2k / eps2)) with eps2 = eps / 3
            let q = k + a * 30 * k;
            let n = q + rng.gen_range(10..=60);
            let heavy = (i / 4) % 2 == 1;
            let mut spec = GenSpec::new(n, rng.gen_range(n..=2 * n), a, 1, rng.gen());
            spec.k = k;
            spec.eps = eps.clone();
            spec.max_width = a - 1;
            spec.neg_prob = if i % 3 == 0 { 0.0 } else { 0.05 };
            spec.max_mult = if heavy { 60 } else { 2 };
            let phi = random_formula(&spec).expect("corpus generation");
            Case {
                label: format!("positive-stress a={a} k={k} heavy={heavy} #{i}"),
                phi,
                k,
                eps,
                a,
                b: 1,
            }
        })
        .collect()
}

/// Few variables and very large multiplicities, so the clause stage scales.
pub fn clause_stress_corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|i| {
            let (a, b) = if i % 2 == 0 { (2, 1) } else { (2, 2) };
            let n = rng.gen_range(3..=5);
            let mut spec = GenSpec::new(n, rng.gen_range(3..=8), a, b, rng.gen());
            spec.k = 1 + i % 2;
            spec.eps = if i % 3 == 0 { ratio(1, 5) } else { ratio(1, 8) };
            spec.max_width = 2;
            spec.neg_prob = 0.3;
            spec.max_mult = 1_000_000;
            let phi = random_formula(&spec).expect("corpus generation");
            Case {
                label: format!("clause-stress a={a} b={b} #{i}"),
                phi,
                k: spec.k,
                eps: spec.eps,
                a,
                b,
            }
        })
        .collect()
}

/// Formulas without negative literals, `n <= 15`, `k <= 4`.
pub fn monotone_corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(4..=15);
            let (a, b) = [(2, 2), (2, 3), (3, 2)][i % 3];
            let mut spec = GenSpec::new(n, rng.gen_range(5..=40), a, b, rng.gen());
            spec.k = 1 + i % 4;
            spec.max_width = rng.gen_range(1..=4);
            spec.neg_prob = 0.0;
            let phi = random_formula(&spec).expect("corpus generation");
            Case {
                label: format!("monotone #{i}"),
                phi,
                k: spec.k,
                eps: spec.eps,
                a,
                b,
            }
        })
        .collect()
}
