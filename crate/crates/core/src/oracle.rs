//! Polynomial-time lower bounds on the optimum.
//!
//! Every strategy returns a feasible solution together with its exact value,
//! so the value is always a valid lower bound on `OPT`. Guaranteed ratios:
//! `Exact` is optimal, `Greedy` is `(1 - 1/e)`-approximate on monotone
//! formulas, and `BestOfBaselines` carries no proven general ratio.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{brute_force_opt, Budget, Formula, Solution, Tracker, VarId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Exact,
    Greedy,
    #[default]
    #[serde(rename = "best-of")]
    BestOfBaselines,
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OracleKind::Exact),
            "greedy" => Ok(OracleKind::Greedy),
            "best-of" | "best-of-baselines" => Ok(OracleKind::BestOfBaselines),
            other => Err(Error::InvalidParameter(format!("unknown oracle `{other}`"))),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Exact => "exact",
            OracleKind::Greedy => "greedy",
            OracleKind::BestOfBaselines => "best-of",
        })
    }
}

pub fn approx_solve(
    phi: &Formula,
    k: usize,
    kind: OracleKind,
    budget: Budget,
) -> Result<(Solution, u64)> {
    match kind {
        OracleKind::Exact => brute_force_opt(phi, k, budget),
        OracleKind::Greedy => Ok(greedy(phi, k)),
        OracleKind::BestOfBaselines => Ok(best_of_baselines(phi, k)),
    }
}

/// Adds the variable with the largest marginal gain, up to `k` times.
/// Ties go to the smallest id; stops once no variable strictly helps.
pub fn greedy(phi: &Formula, k: usize) -> (Solution, u64) {
    let mut tracker = Tracker::new(phi);
    let mut chosen = vec![false; phi.n_vars()];
    let mut picked = Vec::new();
    for _ in 0..k {
        let best = (0..phi.n_vars())
            .filter(|&v| !chosen[v])
            .map(|v| (tracker.gain(VarId::from(v)), v))
            .fold(None, |best: Option<(i128, usize)>, (g, v)| match best {
                Some((bg, _)) if bg >= g => best,
                _ => Some((g, v)),
            });
        match best {
            Some((gain, v)) if gain > 0 => {
                chosen[v] = true;
                tracker.add(VarId::from(v));
                picked.push(VarId::from(v));
            }
            _ => break,
        }
    }
    let value = tracker.value();
    (Solution::new(picked), value)
}

/// Best of the empty solution, every singleton and the greedy solution.
pub fn best_of_baselines(phi: &Formula, k: usize) -> (Solution, u64) {
    let mut best = (Solution::empty(), phi.neg_mass());
    let mut consider = |cand: (Solution, u64)| {
        if cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
            best = cand;
        }
    };
    if k >= 1 {
        let tracker = Tracker::new(phi);
        let base = tracker.value() as i128;
        for v in 0..phi.n_vars() {
            let v = VarId::from(v);
            let value = (base + tracker.gain(v)) as u64;
            consider((Solution::new([v]), value));
        }
    }
    consider(greedy(phi, k));
    best
}
