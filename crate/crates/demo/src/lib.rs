//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every entry point takes plain strings and numbers and returns a JSON
//! string. Failures come back as `{"error": "..."}` so the page never has
//! to catch exceptions.

use kabsat::generate::{random_formula, random_free_bigraph, rng_from_seed, GenSpec};
use kabsat::graph::{find_sunflower, formula_is_kab_free, is_kab_free};
use kabsat::kernel::{fptas_solve_with, run_kernel, PipelineParams};
use kabsat::oracle::approx_solve;
use kabsat::rational;
use kabsat::report::RunReport;
use kabsat::{brute_force_opt, Budget, Formula, OracleKind, Result, Solution};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Exhaustive searches in the page stop after this many candidates.
const DEMO_BUDGET: Budget = Budget(2_000_000);

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn params(k: usize, eps: &str, a: usize, b: usize) -> Result<PipelineParams> {
    let eps = rational::parse(eps).map_err(|e| kabsat::Error::InvalidParameter(e.to_string()))?;
    PipelineParams::new(k, eps, a, b)
}

fn one_based(y: &Solution) -> Vec<u32> {
    y.vars().iter().map(|v| v.0 + 1).collect()
}

/// Random `K_{a,b}`-free instance in DIMACS form.
#[wasm_bindgen]
pub fn generate_instance(n: usize, m: usize, a: usize, b: usize, seed: u32) -> String {
    respond((|| {
        let spec = GenSpec::new(n, m, a, b, seed as u64);
        let phi = random_formula(&spec)?;
        Ok(json!({ "dimacs": spec.header_comment() + &phi.to_dimacs() }))
    })())
}

/// Runs the kernel pipeline and returns the report plus the kernel text.
#[wasm_bindgen]
pub fn kernelize(text: &str, k: usize, eps: &str, a: usize, b: usize) -> String {
    respond((|| {
        let phi: Formula = text.parse()?;
        let p = params(k, eps, a, b)?;
        let (kernel, trace) = run_kernel(&phi, &p, OracleKind::BestOfBaselines, DEMO_BUDGET)?;
        let report = RunReport::new(&phi, trace, &kernel);
        Ok(json!({
            "free": formula_is_kab_free(&phi, a, b),
            "report": serde_json::to_value(&report).expect("report serializes"),
            "kernel": kernel.to_dimacs(),
        }))
    })())
}

/// Solves one instance with every available method.
///
/// The exact row is `null` when enumeration would exceed the demo budget.
#[wasm_bindgen]
pub fn compare_solvers(text: &str, k: usize, eps: &str, a: usize, b: usize) -> String {
    respond((|| {
        let phi: Formula = text.parse()?;
        let p = params(k, eps, a, b)?;
        let row = |name: &str, y: &Solution| {
            json!({ "method": name, "solution": one_based(y), "value": phi.val(y) })
        };
        let mut rows = Vec::new();
        let exact = match brute_force_opt(&phi, k, DEMO_BUDGET) {
            Ok((y, _)) => Some(y),
            Err(kabsat::Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let (greedy, _) = approx_solve(&phi, k, OracleKind::Greedy, DEMO_BUDGET)?;
        let (best, _) = approx_solve(&phi, k, OracleKind::BestOfBaselines, DEMO_BUDGET)?;
        let kernelized = fptas_solve_with(&phi, &p, OracleKind::BestOfBaselines, DEMO_BUDGET)?;
        rows.push(row("kernel + lift", &kernelized));
        rows.push(row("greedy", &greedy));
        rows.push(row("best baseline", &best));
        rows.push(row("empty set", &Solution::empty()));
        let opt = exact.as_ref().map(|y| phi.val(y));
        if let Some(y) = &exact {
            rows.insert(0, row("exact", y));
        }
        Ok(json!({
            "free": formula_is_kab_free(&phi, a, b),
            "opt": opt,
            "rows": rows,
        }))
    })())
}

/// Random `K_{a,b}`-free bipartite graph and a sunflower with `w` petals.
#[wasm_bindgen]
pub fn sunflower_demo(n_left: usize, n_right: usize, max_degree: usize, a: usize, b: usize, w: usize, seed: u32) -> String {
    respond((|| {
        if a == 0 || b == 0 || w == 0 || max_degree == 0 {
            return Err(kabsat::Error::InvalidParameter(
                "a, b, w and the degree must be at least 1".into(),
            ));
        }
        let mut rng = rng_from_seed(seed as u64);
        let g = random_free_bigraph(&mut rng, n_left, n_right.max(1), 1..=max_degree, a, b, true);
        let adj: Vec<&[u32]> = (0..g.n_left()).map(|x| g.neighbors(x)).collect();
        let sunflower = find_sunflower(&g, w).map(|sf| json!({ "petals": sf.petals, "core": sf.core }));
        Ok(json!({
            "n_right": g.n_right(),
            "adj": adj,
            "free": is_kab_free(&g, a, b, DEMO_BUDGET)?,
            "sunflower": sunflower,
        }))
    })())
}
