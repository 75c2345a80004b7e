//! Machine-readable summary of one kernelization or solving run.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::formula::{Formula, Solution};
use crate::kernel::KernelTrace;
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaStats {
    pub n_vars: usize,
    pub distinct_clauses: usize,
    pub mass: u64,
    pub neg_mass: u64,
}

impl FormulaStats {
    pub fn of(phi: &Formula) -> Self {
        FormulaStats {
            n_vars: phi.n_vars(),
            distinct_clauses: phi.distinct_clauses(),
            mass: phi.mass(),
            neg_mass: phi.neg_mass(),
        }
    }
}

/// Kernel size against the closed-form bounds recorded in the trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub picked: usize,
    #[serde(with = "rational")]
    pub picked_bound: Rational,
    pub picked_ok: bool,
    pub kernel_vars: usize,
    #[serde(with = "rational::big_uint")]
    pub var_bound: BigUint,
    pub vars_ok: bool,
    pub kernel_mass: u64,
    pub mass_bound: Option<u64>,
    pub mass_ok: bool,
}

impl BoundCheck {
    pub fn new(trace: &KernelTrace, kernel: &Formula) -> Self {
        let s1 = &trace.stage1;
        let picked = s1.picked.len();
        let kernel_vars = kernel.n_vars();
        let kernel_mass = kernel.mass();
        BoundCheck {
            picked,
            picked_ok: picked == 0 || int(picked as u64) < s1.picked_bound,
            picked_bound: s1.picked_bound.clone(),
            kernel_vars,
            vars_ok: BigUint::from(kernel_vars) <= trace.stage2.var_bound,
            var_bound: trace.stage2.var_bound.clone(),
            kernel_mass,
            mass_bound: trace.stage3.mass_bound,
            mass_ok: trace.stage3.mass_bound.map_or(true, |b| kernel_mass <= b),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.picked_ok && self.vars_ok && self.mass_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub input: FormulaStats,
    pub trace: KernelTrace,
    pub kernel: FormulaStats,
    pub bounds: BoundCheck,
    /// 1-based variable indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opt: Option<u64>,
    /// Wall-clock milliseconds per stage.
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(input: &Formula, trace: KernelTrace, kernel: &Formula) -> Self {
        RunReport {
            input: FormulaStats::of(input),
            bounds: BoundCheck::new(&trace, kernel),
            kernel: FormulaStats::of(kernel),
            trace,
            solution: None,
            value: None,
            opt: None,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn with_solution(mut self, phi: &Formula, y: &Solution) -> Self {
        self.solution = Some(y.vars().iter().map(|v| v.0 + 1).collect());
        self.value = Some(phi.val(y));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Value over optimum, when both are known.
    pub fn ratio(&self) -> Option<Rational> {
        match (self.value, self.opt) {
            (Some(v), Some(o)) if o > 0 => Some(int(v) / int(o)),
            (Some(_), Some(_)) => Some(int(1)),
            _ => None,
        }
    }
}
