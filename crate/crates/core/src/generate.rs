//! Seeded generators for `K_{a,b}`-free formulas and bigraphs.
//!
//! All randomness comes from a ChaCha8 stream seeded with a `u64`, so a
//! fixed seed reproduces the same instance on every platform.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, VarId};
use crate::graph::{for_each_subset, formula_is_kab_free, Bigraph};
use crate::rational::{self, Rational};

/// Recipe for a random instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    /// Target number of distinct clauses.
    pub m: usize,
    pub k: usize,
    #[serde(with = "rational")]
    pub eps: Rational,
    pub a: usize,
    pub b: usize,
    pub max_width: usize,
    pub max_mult: u64,
    pub neg_prob: f64,
    pub seed: u64,
    /// Clause samples drawn before giving up.
    pub attempts: usize,
}

impl GenSpec {
    pub fn new(n: usize, m: usize, a: usize, b: usize, seed: u64) -> Self {
        GenSpec {
            n,
            m,
            k: 2,
            eps: rational::ratio(1, 8),
            a,
            b,
            max_width: 3,
            max_mult: 20,
            neg_prob: 0.3,
            seed,
            attempts: 40 * m + 200,
        }
    }

    /// Comment lines describing the recipe, for the head of an instance file.
    pub fn header_comment(&self) -> String {
        format!(
            "c kabsat generate n={} m={} k={} eps={} a={} b={} width={} mult={} neg={} seed={}\n",
            self.n,
            self.m,
            self.k,
            rational::to_string(&self.eps),
            self.a,
            self.b,
            self.max_width,
            self.max_mult,
            self.neg_prob,
            self.seed
        )
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `K_{a,b}`-free formula.
///
/// Clauses are sampled one at a time (width uniform in `1..=max_width`,
/// distinct variables, each negated with probability `neg_prob`,
/// multiplicity uniform in `1..=max_mult`, capped so repeated samples of a
/// clause stay within `max_mult`). A sample whose `a`-subsets of
/// variables would reach `b` clause copies has its multiplicity lowered to
/// the largest admissible value, or is rejected when none is. Sampling
/// stops at `m` distinct clauses or after `attempts` samples; the result is
/// re-checked with [`formula_is_kab_free`].
pub fn random_formula(spec: &GenSpec) -> Result<Formula> {
    if spec.a == 0 || spec.b == 0 {
        return Err(Error::InvalidParameter("a and b must be at least 1".into()));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut phi = Formula::new(spec.n);
    let mut load: HashMap<Vec<u32>, u64> = HashMap::new();
    let max_width = spec.max_width.min(spec.n);
    let neg_prob = spec.neg_prob.clamp(0.0, 1.0);
    let mut buf = Vec::with_capacity(spec.a);

    for _ in 0..spec.attempts {
        if phi.distinct_clauses() >= spec.m || max_width == 0 {
            break;
        }
        let width = rng.gen_range(1..=max_width as u32) as usize;
        let mut vars: Vec<u32> = index::sample(&mut rng, spec.n, width)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        vars.sort_unstable();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for &v in &vars {
            if rng.gen_bool(neg_prob) {
                neg.push(VarId(v));
            } else {
                pos.push(VarId(v));
            }
        }
        let clause = Clause::new(pos, neg).expect("sampled variables are distinct");
        let max_mult = spec.max_mult.max(1);
        let wanted = rng
            .gen_range(1..=max_mult)
            .min(max_mult - phi.multiplicity(&clause).min(max_mult));

        let mut worst = None;
        for_each_subset(&vars, spec.a, 0, &mut buf, &mut |sub| {
            let seen = load.get(sub).copied().unwrap_or(0);
            worst = Some(worst.map_or(seen, |w: u64| w.max(seen)));
        });
        let mult = match worst {
            None => wanted,
            Some(w) => wanted.min((spec.b as u64 - 1).saturating_sub(w)),
        };
        if mult == 0 {
            continue;
        }
        for_each_subset(&vars, spec.a, 0, &mut buf, &mut |sub| {
            *load.entry(sub.to_vec()).or_insert(0) += mult;
        });
        phi.add(clause, mult);
    }

    if phi.distinct_clauses() < spec.m.min(1) {
        return Err(Error::GenerationExhausted {
            a: spec.a,
            b: spec.b,
            attempts: spec.attempts,
        });
    }
    debug_assert!(formula_is_kab_free(&phi, spec.a, spec.b));
    Ok(phi)
}

/// Random `K_{a,b}`-free bigraph with `n_left` left vertices.
///
/// Each left vertex draws a target degree from `degrees` and tries random
/// neighborhoods that keep the graph free. After repeated failures the
/// vertex either gets one more right vertex to work with (`grow_right`) or
/// a smaller target degree.
pub fn random_free_bigraph(
    rng: &mut impl Rng,
    n_left: usize,
    n_right: usize,
    degrees: RangeInclusive<usize>,
    a: usize,
    b: usize,
    grow_right: bool,
) -> Bigraph {
    assert!(a >= 1 && b >= 1, "a and b must be at least 1");
    const TRIES: usize = 24;
    let mut n_right = n_right;
    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(n_left);
    // Number of left vertices adjacent to every vertex of a b-subset.
    let mut common: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut buf = Vec::with_capacity(b);

    for _ in 0..n_left {
        let mut target = rng.gen_range(*degrees.start() as u32..=*degrees.end() as u32) as usize;
        if a == 1 {
            target = target.min(b - 1);
        }
        let mut failures = 0;
        let nbrs = loop {
            let d = target.min(n_right);
            let mut cand: Vec<u32> = index::sample(rng, n_right, d)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            cand.sort_unstable();
            let mut ok = true;
            for_each_subset(&cand, b, 0, &mut buf, &mut |sub| {
                if common.get(sub).copied().unwrap_or(0) + 1 >= a {
                    ok = false;
                }
            });
            if ok {
                break cand;
            }
            failures += 1;
            if failures % TRIES == 0 {
                if grow_right {
                    n_right += 1;
                } else {
                    target -= 1;
                }
            }
        };
        for_each_subset(&nbrs, b, 0, &mut buf, &mut |sub| {
            *common.entry(sub.to_vec()).or_insert(0) += 1;
        });
        adj.push(nbrs);
    }
    Bigraph::new(n_right, adj)
}
