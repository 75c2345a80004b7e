//! The approximate kernel: heavy-negative clause removal, negative-variable
//! reduction, positive-variable reduction, clause-count reduction, plus
//! solution lifting, the kernel-based solver and the multiset-to-set
//! transformation.
//!
//! Each stage returns its output formula together with a trace that records
//! every threshold it used, so that the per-stage guarantees can be audited
//! after the fact (see [`crate::verify`]).

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{brute_force_opt, Budget, Formula, Solution, VarId};
use crate::graph::{find_sunflower, incidence_subgraph};
use crate::oracle::{approx_solve, OracleKind};
use crate::rational::{self, int, Rational};

/// Parameters of one kernelization run. `eps` lies strictly inside `(0, 1/4)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub k: usize,
    #[serde(with = "rational")]
    pub eps: Rational,
    pub a: usize,
    pub b: usize,
}

impl PipelineParams {
    pub fn new(k: usize, eps: Rational, a: usize, b: usize) -> Result<Self> {
        if eps <= Rational::zero() || eps >= rational::ratio(1, 4) {
            return Err(Error::EpsilonOutOfRange(rational::to_string(&eps)));
        }
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter(format!(
                "a and b must be at least 1 (got a={a}, b={b})"
            )));
        }
        Ok(PipelineParams { k, eps, a, b })
    }

    /// Budget handed to each of the three lossy stages.
    pub fn stage_eps(&self) -> Rational {
        &self.eps / int(3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage1Trace {
    /// Threshold `eps1 / (2k) * |C_neg|`, frozen at stage entry.
    #[serde(with = "rational")]
    pub tau: Rational,
    /// Variables removed from the live set, in removal order.
    pub picked: Vec<VarId>,
    pub deleted_clause_mass: u64,
    /// `|C_neg|` at stage entry.
    pub neg_mass: u64,
    /// `2k * H_{k+1} / eps1`; the number of picked variables stays below it.
    #[serde(with = "rational")]
    pub picked_bound: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage2Case {
    /// At most `q` positive variables: nothing to do.
    #[serde(rename = "identity")]
    Identity,
    /// The `q` highest-degree positive variables all have high degree.
    I,
    /// Low degrees: sunflower-based deletion.
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage2Trace {
    pub case: Stage2Case,
    #[serde(with = "rational::big_uint")]
    pub q: BigUint,
    pub tau2: Option<u64>,
    pub opt_tilde: Option<u64>,
    /// Number of negative variables entering the stage.
    pub neg_vars: usize,
    /// Surviving variables in input coordinates; output variable `i` is `kept[i]`.
    pub kept: Vec<VarId>,
    /// Deleted variables; for case II in deletion order.
    pub deleted: Vec<VarId>,
    /// Closed-form bound on the number of output variables.
    #[serde(with = "rational::big_uint")]
    pub var_bound: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage3Trace {
    #[serde(with = "rational")]
    pub s: Rational,
    pub applied: bool,
    pub opt_tilde: u64,
    pub oracle: OracleKind,
    pub mass_before: u64,
    pub mass_after: u64,
    /// `floor(m / s)` when applied.
    pub mass_bound: Option<u64>,
}

/// Everything needed to lift kernel solutions and to audit the reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTrace {
    pub params: PipelineParams,
    pub n_vars: usize,
    pub stage0_deleted: u64,
    pub stage1: Stage1Trace,
    pub stage2: Stage2Trace,
    pub stage3: Stage3Trace,
}

impl KernelTrace {
    /// Original variable for each kernel variable.
    pub fn var_map(&self) -> &[VarId] {
        &self.stage2.kept
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Removes every clause with at least `k + 1` negative literals. Such a
/// clause is satisfied by every `|Y| <= k`, so `val` shifts by exactly the
/// returned mass.
pub fn drop_heavy_negative_clauses(phi: &Formula, k: usize) -> (Formula, u64) {
    phi.retain_clauses(|c| c.neg().len() <= k)
}

/// Normalized negative degree of `v` with respect to the live set:
/// the sum over clause copies with `¬v` of `1 / |neg(C) ∩ live|`.
pub fn nndeg(phi: &Formula, live: &[VarId], v: VarId) -> Rational {
    let mut is_live = vec![false; phi.n_vars()];
    for u in live {
        is_live[u.index()] = true;
    }
    phi.clauses()
        .filter(|(c, _)| c.neg().binary_search(&v).is_ok())
        .map(|(c, m)| {
            let denom = c.neg().iter().filter(|u| is_live[u.index()]).count();
            Rational::new(m.into(), denom.into())
        })
        .sum()
}

/// Negative-variable reduction.
///
/// Repeatedly removes from the live set the variable with the largest
/// normalized negative degree while it exceeds `tau`, then deletes every
/// clause that still has a live negative literal. Only picked variables can
/// remain negative.
pub fn step1_reduce_negative(phi: &Formula, k: usize, eps1: &Rational) -> (Formula, Stage1Trace) {
    let n = phi.n_vars();
    let neg_mass = phi.neg_mass();
    let tau = if k == 0 {
        Rational::zero()
    } else {
        eps1 * int(neg_mass) / int(2 * k as u64)
    };

    let negs: Vec<(&[VarId], u64)> = phi
        .clauses()
        .filter(|(c, _)| !c.neg().is_empty())
        .map(|(c, m)| (c.neg(), m))
        .collect();
    let mut occ = vec![Vec::new(); n];
    for (i, (neg, _)) in negs.iter().enumerate() {
        for v in *neg {
            occ[v.index()].push(i);
        }
    }
    let mut live_count: Vec<usize> = negs.iter().map(|(neg, _)| neg.len()).collect();
    let mut live = vec![true; n];
    let mut score = vec![Rational::zero(); n];
    for (neg, m) in &negs {
        let share = Rational::new((*m).into(), neg.len().into());
        for v in *neg {
            score[v.index()] += &share;
        }
    }

    let mut picked = Vec::new();
    loop {
        let best = (0..n)
            .filter(|&v| live[v] && score[v] > tau)
            .fold(None, |best: Option<usize>, v| match best {
                Some(b) if score[b] >= score[v] => Some(b),
                _ => Some(v),
            });
        let Some(v) = best else { break };
        live[v] = false;
        picked.push(VarId::from(v));
        for &i in &occ[v] {
            let (neg, m) = negs[i];
            let old = live_count[i];
            let new = old - 1;
            live_count[i] = new;
            if new == 0 {
                continue;
            }
            // 1/new - 1/old = 1/(new * old)
            let delta = Rational::new(m.into(), (new * old).into());
            for u in neg {
                if live[u.index()] {
                    score[u.index()] += &delta;
                }
            }
        }
    }

    let (out, deleted) =
        phi.retain_clauses(|c| c.neg().iter().all(|v| !live[v.index()]));
    let picked_bound = if k == 0 {
        Rational::zero()
    } else {
        int(2 * k as u64) * rational::harmonic(k as u64 + 1) / eps1
    };
    let trace = Stage1Trace {
        tau,
        picked,
        deleted_clause_mass: deleted,
        neg_mass,
        picked_bound,
    };
    (out, trace)
}

/// `k + ceil(a * (2bk / eps2)^b)`.
pub fn positive_keep_count(k: usize, a: usize, b: usize, eps2: &Rational) -> BigUint {
    let base = int(2 * (b * k) as u64) / eps2;
    let term = int(a as u64) * rational::pow(&base, b as u32);
    BigUint::from(k) + rational::ceil_to_biguint(&term)
}

/// Positive-variable reduction.
///
/// Keeps the negative variables plus the `q` highest-degree positive ones
/// when those all have degree at least `2b / eps2`; otherwise deletes
/// low-degree positive variables one by one from sunflowers of size
/// `ceil(k * tau2 / eps2) + 1`. The output is renumbered densely, see
/// [`Stage2Trace::kept`].
pub fn step2_reduce_positive(
    phi: &Formula,
    params: &PipelineParams,
    eps2: &Rational,
) -> (Formula, Stage2Trace) {
    let n = phi.n_vars();
    let (k, a, b) = (params.k, params.a, params.b);
    let negative = phi.negative_mask();
    let neg_vars = negative.iter().filter(|&&x| x).count();
    let q = positive_keep_count(k, a, b, eps2);
    let all: Vec<VarId> = (0..n).map(VarId::from).collect();

    let mut positive: Vec<VarId> = all.iter().copied().filter(|v| !negative[v.index()]).collect();
    let q_small = q.to_usize().filter(|&q| q < positive.len());
    let Some(q_usize) = q_small else {
        let trace = Stage2Trace {
            case: Stage2Case::Identity,
            var_bound: BigUint::from(neg_vars) + &q,
            q,
            tau2: None,
            opt_tilde: None,
            neg_vars,
            kept: all,
            deleted: Vec::new(),
        };
        return (phi.clone(), trace);
    };

    let deg = phi.degrees();
    positive.sort_by(|x, y| deg[y.index()].cmp(&deg[x.index()]).then(x.cmp(y)));
    let top = &positive[..q_usize];
    // q = 0 only for k = 0, where no positive variable can ever be set.
    let tau2 = top.last().map(|v| deg[v.index()]);
    let base_bound = BigUint::from(neg_vars) + &q;

    if tau2.map_or(true, |t| int(t) >= int(2 * b as u64) / eps2) {
        let mut keep_mask = negative.clone();
        for v in top {
            keep_mask[v.index()] = true;
        }
        let (kept, deleted): (Vec<VarId>, Vec<VarId>) =
            all.iter().partition(|v| keep_mask[v.index()]);
        let out = phi.restrict_to(&kept);
        let trace = Stage2Trace {
            case: Stage2Case::I,
            q,
            tau2,
            opt_tilde: None,
            neg_vars,
            kept,
            deleted,
            var_bound: base_bound,
        };
        return (out, trace);
    }

    let tau2 = tau2.expect("q >= 1 here");
    let opt_tilde_r = (int(k as u64) * int(tau2) / eps2).ceil();
    let opt_tilde = opt_tilde_r.to_integer().to_u64().unwrap_or(u64::MAX);
    let low_bound = BigUint::from(a) * num_traits::pow(BigUint::from(opt_tilde) * tau2, b);
    let w = usize::try_from(opt_tilde).ok().and_then(|o| o.checked_add(1));

    let mut low: Vec<VarId> = all
        .iter()
        .copied()
        .filter(|v| !negative[v.index()] && deg[v.index()] <= tau2)
        .collect();
    let mut current = phi.clone();
    let mut deleted = Vec::new();
    if let Some(w) = w {
        while low.len() >= w {
            let g = incidence_subgraph(&current, &low);
            let Some(sf) = find_sunflower(&g, w) else { break };
            let cur_deg = current.degrees();
            let victim = sf
                .petals
                .iter()
                .map(|&p| low[p])
                .min_by_key(|v| (cur_deg[v.index()], *v))
                .expect("sunflower has petals");
            current = current.delete_vars(&[victim]);
            low.retain(|&v| v != victim);
            deleted.push(victim);
        }
    }
    let mut dead = vec![false; n];
    for v in &deleted {
        dead[v.index()] = true;
    }
    let kept: Vec<VarId> = all.into_iter().filter(|v| !dead[v.index()]).collect();
    let out = current.restrict_to(&kept);
    let trace = Stage2Trace {
        case: Stage2Case::II,
        q,
        tau2: Some(tau2),
        opt_tilde: Some(opt_tilde),
        neg_vars,
        kept,
        deleted,
        var_bound: base_bound + low_bound,
    };
    (out, trace)
}

/// `s = eps3 * opt_tilde / (10 b (2n)^a)`, or zero for a formula without
/// variables.
pub fn scaling_factor(eps3: &Rational, opt_tilde: u64, n: usize, a: usize, b: usize) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let denom = int(10 * b as u64) * rational::pow(&int(2 * n as u64), a as u32);
    eps3 * int(opt_tilde) / denom
}

/// Clause-count reduction by scaling and rounding multiplicities: each
/// distinct clause keeps `floor(m_C / s)` copies. Skipped when `s <= 1`.
pub fn step3_reduce_clauses(
    phi: &Formula,
    params: &PipelineParams,
    eps3: &Rational,
    oracle: OracleKind,
    budget: Budget,
) -> Result<(Formula, Stage3Trace)> {
    let (_, opt_tilde) = approx_solve(phi, params.k, oracle, budget)?;
    let s = scaling_factor(eps3, opt_tilde, phi.n_vars(), params.a, params.b);
    let mass_before = phi.mass();
    if s <= int(1) {
        let trace = Stage3Trace {
            s,
            applied: false,
            opt_tilde,
            oracle,
            mass_before,
            mass_after: mass_before,
            mass_bound: None,
        };
        return Ok((phi.clone(), trace));
    }
    let out = phi.map_multiplicities(|m| rational::floor_div(m, &s));
    let trace = Stage3Trace {
        mass_bound: Some(rational::floor_div(mass_before, &s)),
        s,
        applied: true,
        opt_tilde,
        oracle,
        mass_before,
        mass_after: out.mass(),
    };
    Ok((out, trace))
}

/// Stage names reported to [`run_kernel_with`] hooks, in order.
pub const STAGES: [&str; 4] = ["stage0", "stage1", "stage2", "stage3"];

/// Full reduction: heavy-negative clauses, then the three lossy stages with
/// `eps / 3` each.
pub fn run_kernel(
    phi: &Formula,
    params: &PipelineParams,
    oracle: OracleKind,
    budget: Budget,
) -> Result<(Formula, KernelTrace)> {
    run_kernel_with(phi, params, oracle, budget, |_| {})
}

/// [`run_kernel`] with a hook invoked before each stage and once at the end
/// (with `"done"`), e.g. for timing.
pub fn run_kernel_with(
    phi: &Formula,
    params: &PipelineParams,
    oracle: OracleKind,
    budget: Budget,
    hook: impl FnMut(&'static str),
) -> Result<(Formula, KernelTrace)> {
    let stages = run_stages(phi, params, oracle, budget, hook)?;
    Ok((stages.kernel, stages.trace))
}

/// Output of every stage of one run. `after0` and `after1` use the original
/// numbering; `after2` and `kernel` use the kernel numbering.
#[derive(Clone, Debug)]
pub struct KernelStages {
    pub after0: Formula,
    pub after1: Formula,
    pub after2: Formula,
    pub kernel: Formula,
    pub trace: KernelTrace,
}

/// [`run_kernel_with`], keeping the intermediate formulas.
pub fn run_stages(
    phi: &Formula,
    params: &PipelineParams,
    oracle: OracleKind,
    budget: Budget,
    mut hook: impl FnMut(&'static str),
) -> Result<KernelStages> {
    let eps_i = params.stage_eps();
    hook(STAGES[0]);
    let (after0, stage0_deleted) = drop_heavy_negative_clauses(phi, params.k);
    hook(STAGES[1]);
    let (after1, stage1) = step1_reduce_negative(&after0, params.k, &eps_i);
    hook(STAGES[2]);
    let (after2, stage2) = step2_reduce_positive(&after1, params, &eps_i);
    hook(STAGES[3]);
    let (kernel, stage3) = step3_reduce_clauses(&after2, params, &eps_i, oracle, budget)?;
    hook("done");
    let trace = KernelTrace {
        params: params.clone(),
        n_vars: phi.n_vars(),
        stage0_deleted,
        stage1,
        stage2,
        stage3,
    };
    Ok(KernelStages {
        after0,
        after1,
        after2,
        kernel,
        trace,
    })
}

/// Maps a kernel solution back to original variables without any repair.
pub fn map_kernel_solution(trace: &KernelTrace, y_kernel: &Solution) -> Result<Solution> {
    let map = trace.var_map();
    let vars = y_kernel
        .vars()
        .iter()
        .map(|v| {
            map.get(v.index()).copied().ok_or(Error::UnknownVariable {
                var: v.index() + 1,
                n_vars: map.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Solution::new(vars))
}

/// Best of the mapped kernel solution, the oracle's solution and the empty
/// solution, measured on the original formula. Earlier candidates win ties.
pub fn lift_solution(
    trace: &KernelTrace,
    y_kernel: &Solution,
    phi_original: &Formula,
    k: usize,
    oracle: OracleKind,
    budget: Budget,
) -> Result<Solution> {
    if y_kernel.len() > k {
        return Err(Error::InvalidParameter(format!(
            "kernel solution sets {} variables, k = {k}",
            y_kernel.len()
        )));
    }
    let mapped = map_kernel_solution(trace, y_kernel)?;
    let (fallback, _) = approx_solve(phi_original, k, oracle, budget)?;
    let best = [mapped, fallback, Solution::empty()]
        .into_iter()
        .map(|y| (phi_original.val(&y), y))
        .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
        .expect("three candidates");
    Ok(best.1)
}

/// Kernel-based approximation scheme: kernelize, solve the kernel exactly,
/// lift with the best-of-baselines oracle.
pub fn fptas_solve(phi: &Formula, params: &PipelineParams, budget: Budget) -> Result<Solution> {
    fptas_solve_with(phi, params, OracleKind::BestOfBaselines, budget)
}

/// [`fptas_solve`] with an explicit oracle for the clause stage and lifting.
pub fn fptas_solve_with(
    phi: &Formula,
    params: &PipelineParams,
    oracle: OracleKind,
    budget: Budget,
) -> Result<Solution> {
    let (kernel, trace) = run_kernel(phi, params, oracle, budget)?;
    let (y_kernel, _) = brute_force_opt(&kernel, params.k, budget)?;
    lift_solution(&trace, &y_kernel, phi, params.k, oracle, budget)
}

/// Number of replicas per clause copy in [`to_set_instance`]: `ceil(k / eps)`,
/// at least one.
pub fn set_replication(k: usize, eps: &Rational) -> u64 {
    let r = (int(k as u64) / eps).ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    r.max(1)
}

/// Turns a multiset instance into a set instance: every clause copy is
/// replicated `ceil(k / eps)` times and each replica receives its own fresh
/// positive variable. Fresh variables are numbered after the original ones.
pub fn to_set_instance(phi: &Formula, k: usize, eps: &Rational) -> Formula {
    let r = set_replication(k, eps);
    let total = usize::try_from(phi.mass().saturating_mul(r)).expect("instance too large");
    let n = phi.n_vars();
    let mut out = Formula::new(n + total);
    let mut fresh = n;
    for (c, m) in phi.clauses() {
        for _ in 0..m * r {
            let clause = crate::Clause::new(
                c.pos().iter().copied().chain([VarId::from(fresh)]),
                c.neg().iter().copied(),
            )
            .expect("fresh variables cannot clash");
            out.add(clause, 1);
            fresh += 1;
        }
    }
    out
}

/// Drops fresh variables from a solution of [`to_set_instance`]'s output.
pub fn lift_from_set_instance(y: &Solution, n_original: usize) -> Solution {
    Solution::new(y.vars().iter().copied().filter(|v| v.index() < n_original))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    #[test]
    fn params_validate_eps() {
        assert!(PipelineParams::new(2, ratio(1, 8), 2, 2).is_ok());
        assert!(matches!(
            PipelineParams::new(2, ratio(3, 10), 2, 2),
            Err(Error::EpsilonOutOfRange(_))
        ));
        assert!(PipelineParams::new(2, ratio(1, 4), 2, 2).is_err());
        assert!(PipelineParams::new(2, int(0), 2, 2).is_err());
        assert!(PipelineParams::new(2, ratio(1, 8), 0, 2).is_err());
    }

    #[test]
    fn heavy_negative_examples() {
        let phi = Formula::from_lits(3, &[(&[-1, -2, -3], 2)]);
        let (out, h) = drop_heavy_negative_clauses(&phi, 2);
        assert!(out.is_empty());
        assert_eq!(h, 2);

        let mono = Formula::from_lits(2, &[(&[1, 2], 3)]);
        assert_eq!(drop_heavy_negative_clauses(&mono, 0), (mono.clone(), 0));

        let phi = Formula::from_lits(1, &[(&[-1], 1)]);
        assert_eq!(drop_heavy_negative_clauses(&phi, 1), (phi.clone(), 0));
    }

    #[test]
    fn nndeg_examples() {
        let phi = Formula::from_lits(3, &[(&[-1, -2, 3], 1)]);
        assert_eq!(nndeg(&phi, &[v(0), v(1)], v(0)), ratio(1, 2));

        let mono = Formula::from_lits(2, &[(&[1, 2], 1)]);
        assert_eq!(nndeg(&mono, &[v(0), v(1)], v(0)), int(0));

        let phi = Formula::from_lits(2, &[(&[-1], 3), (&[-1, -2], 2)]);
        assert_eq!(nndeg(&phi, &[v(0), v(1)], v(0)), int(4));
        // Shrinking the live set raises the share of the survivors.
        assert_eq!(nndeg(&phi, &[v(0)], v(0)), int(5));
    }

    #[test]
    fn step1_identity_on_monotone() {
        let phi = Formula::from_lits(3, &[(&[1, 2], 2), (&[3], 1)]);
        let (out, t) = step1_reduce_negative(&phi, 2, &ratio(1, 12));
        assert_eq!(out, phi);
        assert!(t.picked.is_empty());
        assert_eq!(t.tau, int(0));
        assert_eq!(t.deleted_clause_mass, 0);
    }

    #[test]
    fn step1_single_negative_literal() {
        let phi = Formula::from_lits(1, &[(&[-1], 1)]);
        let (out, t) = step1_reduce_negative(&phi, 1, &ratio(1, 12));
        assert_eq!(t.tau, ratio(1, 24));
        assert_eq!(t.picked, vec![v(0)]);
        assert_eq!(out, phi);
    }

    #[test]
    fn step1_picks_heavy_and_deletes_light() {
        // x1 carries 40 negative copies, x2..x9 one each; tau = 1.
        let mut clauses: Vec<(Vec<i64>, u64)> = vec![(vec![-1], 40)];
        for i in 2..=9 {
            clauses.push((vec![-i], 1));
        }
        let refs: Vec<(&[i64], u64)> = clauses.iter().map(|(c, m)| (c.as_slice(), *m)).collect();
        let phi = Formula::from_lits(9, &refs);
        assert_eq!(phi.neg_mass(), 48);
        let (out, t) = step1_reduce_negative(&phi, 2, &ratio(1, 12));
        assert_eq!(t.tau, int(1));
        assert_eq!(t.picked, vec![v(0)]);
        assert_eq!(t.deleted_clause_mass, 8);
        assert_eq!(out.mass(), 40);
        assert_eq!(out.negative_vars().len(), 1);
    }

    #[test]
    fn step1_incremental_scores_match_direct_formula() {
        // Re-run the selection loop by hand using the direct nndeg formula.
        let phi = Formula::from_lits(
            4,
            &[(&[-1, -2], 6), (&[-2, -3], 5), (&[-1, -3, -4], 4), (&[-4], 1), (&[2], 3)],
        );
        let eps1 = ratio(1, 2);
        let (_, t) = step1_reduce_negative(&phi, 3, &eps1);
        let tau = &eps1 * int(phi.neg_mass()) / int(6);
        let mut live: Vec<VarId> = (0..4).map(VarId).collect();
        let mut expected = Vec::new();
        loop {
            let best = live
                .iter()
                .map(|&u| (nndeg(&phi, &live, u), u))
                .filter(|(s, _)| *s > tau)
                .fold(None, |best: Option<(Rational, VarId)>, cand| match best {
                    Some(b) if b.0 >= cand.0 => Some(b),
                    _ => Some(cand),
                });
            let Some((_, u)) = best else { break };
            expected.push(u);
            live.retain(|&x| x != u);
        }
        assert_eq!(t.picked, expected);
        assert!(!expected.is_empty());
    }

    #[test]
    fn keep_count_matches_closed_form() {
        // k = 2, a = b = 2, eps2 = 1/12: q = 2 + 2 * (2*2*2*12)^2 = 18434.
        assert_eq!(positive_keep_count(2, 2, 2, &ratio(1, 12)), BigUint::from(18434u32));
        // Non-integral power rounds up.
        assert_eq!(positive_keep_count(1, 1, 1, &ratio(3, 10)), BigUint::from(1u32 + 7));
    }

    #[test]
    fn step2_degenerate_identity() {
        let phi = Formula::from_lits(5, &[(&[1, 2], 1), (&[3, -4], 1), (&[5], 2)]);
        let params = PipelineParams::new(2, ratio(1, 8), 2, 2).unwrap();
        let (out, t) = step2_reduce_positive(&phi, &params, &ratio(1, 12));
        assert_eq!(t.case, Stage2Case::Identity);
        assert_eq!(out, phi);
        assert_eq!(t.kept.len(), 5);
    }

    #[test]
    fn step2_case_one_keeps_top_degrees() {
        // a = b = 1, k = 1, eps2 = 1/5: q = 1 + 10 = 11, threshold 2b/eps2 = 10.
        let mut clauses: Vec<(Vec<i64>, u64)> = Vec::new();
        for i in 1..=11 {
            clauses.push((vec![i], 10 + i as u64));
        }
        for i in 12..=15 {
            clauses.push((vec![i], 2));
        }
        let refs: Vec<(&[i64], u64)> = clauses.iter().map(|(c, m)| (c.as_slice(), *m)).collect();
        let phi = Formula::from_lits(15, &refs);
        let params = PipelineParams::new(1, ratio(1, 5), 1, 1).unwrap();
        let (out, t) = step2_reduce_positive(&phi, &params, &ratio(1, 5));
        assert_eq!(t.case, Stage2Case::I);
        assert_eq!(t.tau2, Some(11));
        assert_eq!(out.n_vars(), 11);
        assert_eq!(t.deleted, (11..15).map(VarId).collect::<Vec<_>>());
    }

    #[test]
    fn step2_case_two_prunes_star() {
        // 30 positive variables sharing one clause copy; a = 2, b = 1, k = 1,
        // eps2 = 1/5: q = 1 + 2*10 = 21, tau2 = 1 < 10, opt_tilde = 5.
        let lits: Vec<i64> = (1..=30).collect();
        let phi = Formula::from_lits(30, &[(&lits, 1)]);
        let params = PipelineParams::new(1, ratio(1, 5), 2, 1).unwrap();
        let (out, t) = step2_reduce_positive(&phi, &params, &ratio(1, 5));
        assert_eq!(t.case, Stage2Case::II);
        assert_eq!(t.opt_tilde, Some(5));
        // Deletion stops once no sunflower of size 6 remains.
        assert_eq!(out.n_vars(), 5);
        assert_eq!(t.deleted.len(), 25);
        let opt_before = brute_force_opt(&phi, 1, Budget::default()).unwrap().1;
        let opt_after = brute_force_opt(&out, 1, Budget::default()).unwrap().1;
        assert_eq!(opt_before, opt_after);
    }

    #[test]
    fn step3_identity_when_scale_small() {
        let phi = Formula::from_lits(2, &[(&[1], 3), (&[-2], 2)]);
        let params = PipelineParams::new(1, ratio(1, 8), 1, 1).unwrap();
        let (out, t) =
            step3_reduce_clauses(&phi, &params, &ratio(1, 24), OracleKind::Exact, Budget::default())
                .unwrap();
        assert!(!t.applied);
        assert_eq!(out, phi);
    }

    #[test]
    fn step3_scales_large_multiplicities() {
        let phi = Formula::from_lits(1, &[(&[1], 1_000_000)]);
        let params = PipelineParams::new(1, ratio(1, 8), 1, 1).unwrap();
        let eps3 = ratio(1, 24);
        let (out, t) =
            step3_reduce_clauses(&phi, &params, &eps3, OracleKind::Exact, Budget::default())
                .unwrap();
        // s = (1/24) * 10^6 / (10 * 2) = 10^6 / 480.
        assert_eq!(t.s, ratio(1_000_000, 480));
        assert!(t.applied);
        assert_eq!(out.mass(), 480);
        assert_eq!(t.mass_bound, Some(480));
    }

    #[test]
    fn floor_rounding_of_multiplicity() {
        assert_eq!(rational::floor_div(10, &int(3)), 3);
    }

    #[test]
    fn kernel_of_empty_formula() {
        let phi = Formula::new(0);
        let params = PipelineParams::new(2, ratio(1, 8), 2, 2).unwrap();
        let (out, t) = run_kernel(&phi, &params, OracleKind::Exact, Budget::default()).unwrap();
        assert!(out.is_empty());
        assert_eq!(t.stage0_deleted, 0);
        assert!(t.stage1.picked.is_empty());
        assert_eq!(t.stage2.case, Stage2Case::Identity);
        assert!(!t.stage3.applied);
    }

    #[test]
    fn kernel_drops_all_heavy_clauses() {
        let phi = Formula::from_lits(4, &[(&[-1, -2, -3], 2), (&[-2, -3, -4], 3)]);
        let params = PipelineParams::new(2, ratio(1, 8), 2, 2).unwrap();
        let (out, t) = run_kernel(&phi, &params, OracleKind::Exact, Budget::default()).unwrap();
        assert!(out.is_empty());
        assert_eq!(t.stage0_deleted, phi.mass());
    }

    #[test]
    fn lift_checks_variables() {
        let phi = Formula::from_lits(2, &[(&[1], 1)]);
        let params = PipelineParams::new(1, ratio(1, 8), 1, 1).unwrap();
        let (_, t) = run_kernel(&phi, &params, OracleKind::Exact, Budget::default()).unwrap();
        let err = lift_solution(
            &t,
            &Solution::new([v(7)]),
            &phi,
            1,
            OracleKind::Greedy,
            Budget::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownVariable { var: 8, .. }));
    }

    #[test]
    fn lift_of_empty_solution() {
        let phi = Formula::from_lits(2, &[(&[1], 2), (&[-2], 1)]);
        let params = PipelineParams::new(1, ratio(1, 8), 1, 1).unwrap();
        let (_, t) = run_kernel(&phi, &params, OracleKind::Exact, Budget::default()).unwrap();
        let y =
            lift_solution(&t, &Solution::empty(), &phi, 1, OracleKind::Greedy, Budget::default())
                .unwrap();
        assert!(phi.val(&y) >= phi.neg_mass());
        assert_eq!(phi.val(&y), 3);
    }

    #[test]
    fn fptas_trivial() {
        let phi = Formula::from_lits(1, &[(&[1], 1)]);
        let params = PipelineParams::new(1, ratio(1, 8), 1, 1).unwrap();
        let y = fptas_solve(&phi, &params, Budget::default()).unwrap();
        assert_eq!(y, Solution::new([v(0)]));
    }

    #[test]
    fn set_instance_examples() {
        let phi = Formula::from_lits(1, &[(&[1], 1)]);
        let out = to_set_instance(&phi, 1, &ratio(1, 2));
        assert_eq!(out.n_vars(), 3);
        assert_eq!(out.distinct_clauses(), 2);
        assert_eq!(out.mass(), 2);
        assert_eq!(out.multiplicity(&crate::Clause::from_lits(&[1, 2]).unwrap()), 1);
        assert_eq!(out.multiplicity(&crate::Clause::from_lits(&[1, 3]).unwrap()), 1);

        assert!(to_set_instance(&Formula::new(2), 3, &ratio(1, 2)).is_empty());

        let phi = Formula::from_lits(1, &[(&[1], 2)]);
        let out = to_set_instance(&phi, 1, &ratio(1, 2));
        assert_eq!(out.distinct_clauses(), 4);
        assert!(out.clauses().all(|(_, m)| m == 1));
    }

    #[test]
    fn trace_json_field_names() {
        let phi = Formula::from_lits(3, &[(&[1, -2], 2), (&[-3], 1)]);
        let params = PipelineParams::new(2, ratio(1, 8), 2, 2).unwrap();
        let (_, t) = run_kernel(&phi, &params, OracleKind::Exact, Budget::default()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        for path in [
            "/stage0_deleted",
            "/stage1/tau",
            "/stage1/picked",
            "/stage2/case",
            "/stage2/q",
            "/stage2/tau2",
            "/stage2/opt_tilde",
            "/stage3/s",
            "/stage3/applied",
        ] {
            assert!(json.pointer(path).is_some(), "missing {path}");
        }
        assert_eq!(json.pointer("/params/eps").unwrap(), "1/8");
        assert_eq!(KernelTrace::from_json(&t.to_json()).unwrap(), t);
    }
}
