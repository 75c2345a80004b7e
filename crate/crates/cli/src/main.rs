use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use kabsat::generate::{random_formula, GenSpec};
use kabsat::graph::formula_is_kab_free;
use kabsat::kernel::{
    fptas_solve_with, lift_solution, run_kernel_with, KernelTrace, PipelineParams, STAGES,
};
use kabsat::rational::{self, Rational};
use kabsat::report::RunReport;
use kabsat::verify::verify_instance;
use kabsat::{brute_force_opt, Budget, Error, Formula, OracleKind, Solution, VarId};

/// Approximate kernels for Max k-Weight SAT on K_{a,b}-free formulas.
#[derive(Parser)]
#[command(name = "kabsat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an instance to a kernel; writes the kernel and its trace.
    Kernelize {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Kernel file (default: <input>.kernel.cnf).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Trace file (default: <input>.trace.json).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Kernelize, solve the kernel exhaustively and lift the answer.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Also compute the exact optimum of the input.
        #[arg(long)]
        verify_exact: bool,
        /// Skip kernelization and enumerate the input directly.
        #[arg(long, conflicts_with = "verify_exact")]
        exact: bool,
    },
    /// Lift a kernel solution back to the original instance.
    Lift {
        /// Original instance.
        input: PathBuf,
        /// Trace written by `kernelize`.
        #[arg(long)]
        trace: PathBuf,
        /// Kernel solution as 1-based variable indices, e.g. "1 4".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        solution: String,
        #[arg(long, default_value = "best-of")]
        oracle: OracleKind,
        #[arg(long, default_value_t = Budget::default().0)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Emit a random K_{a,b}-free instance.
    Generate(GenArgs),
    /// Check every stage guarantee on one instance by full enumeration.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Compare this trace against a fresh run.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Report whether an instance is K_{a,b}-free (exit 0 if free, 1 if not).
    CheckFree {
        input: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    k: usize,
    /// Accuracy, as p/q or decimal, inside (0, 1/4).
    #[arg(long, value_parser = parse_eps)]
    eps: Rational,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    /// Oracle for the clause stage and lifting: exact, greedy or best-of.
    #[arg(long, default_value = "best-of")]
    oracle: OracleKind,
    /// Cap on candidate solutions in exhaustive searches.
    #[arg(long, default_value_t = Budget::default().0)]
    budget: u128,
    #[arg(long)]
    json: bool,
}

impl ParamArgs {
    fn pipeline(&self) -> Result<PipelineParams, Error> {
        PipelineParams::new(self.k, self.eps.clone(), self.a, self.b)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Number of distinct clauses to aim for.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_parser = parse_eps, default_value = "1/8")]
    eps: Rational,
    #[arg(long, default_value_t = 3)]
    max_width: usize,
    #[arg(long, default_value_t = 20)]
    max_mult: u64,
    #[arg(long, default_value_t = 0.3)]
    neg_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Clause samples before giving up (default: 40 m + 200).
    #[arg(long)]
    attempts: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_eps(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

enum Failure {
    Lib(Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) => 2,
        Error::EpsilonOutOfRange(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 1,
    }
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.parse::<Formula>().map_err(Error::from)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn parse_solution(text: &str) -> Result<Solution, Failure> {
    let mut vars = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() || tok == "0" {
            continue;
        }
        let v: u32 = tok
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad variable `{tok}` in solution")))?;
        vars.push(VarId(v - 1));
    }
    Ok(Solution::new(vars))
}

/// Runs the pipeline, timing each stage.
fn kernel_report(phi: &Formula, p: &ParamArgs) -> Result<(Formula, RunReport), Failure> {
    let params = p.pipeline()?;
    let mut marks: Vec<(&str, Instant)> = Vec::new();
    let (kernel, trace) =
        run_kernel_with(phi, &params, p.oracle, Budget(p.budget), |s| marks.push((s, Instant::now())))?;
    let mut report = RunReport::new(phi, trace, &kernel);
    for w in marks.windows(2) {
        let ms = (w[1].1 - w[0].1).as_secs_f64() * 1e3;
        report.timings_ms.insert(w[0].0.to_string(), ms);
    }
    debug_assert_eq!(report.timings_ms.len(), STAGES.len());
    Ok((kernel, report))
}

fn summary(report: &RunReport) -> String {
    let t = &report.trace;
    let mut out = format!(
        "input   n={} distinct={} mass={} neg_mass={}\n",
        report.input.n_vars, report.input.distinct_clauses, report.input.mass, report.input.neg_mass
    );
    out += &format!("stage0  deleted mass {}\n", t.stage0_deleted);
    out += &format!(
        "stage1  tau={} picked={} deleted mass {}\n",
        rational::to_string(&t.stage1.tau),
        t.stage1.picked.len(),
        t.stage1.deleted_clause_mass
    );
    out += &format!(
        "stage2  case={:?} q={} kept={} deleted={}\n",
        t.stage2.case,
        t.stage2.q,
        t.stage2.kept.len(),
        t.stage2.deleted.len()
    );
    out += &format!(
        "stage3  s={} applied={}\n",
        rational::to_string(&t.stage3.s),
        t.stage3.applied
    );
    out += &format!(
        "kernel  n={} distinct={} mass={} bounds {}\n",
        report.kernel.n_vars,
        report.kernel.distinct_clauses,
        report.kernel.mass,
        if report.bounds.all_ok() { "ok" } else { "VIOLATED" }
    );
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Kernelize {
            input,
            params,
            output,
            trace,
        } => {
            let phi = read_formula(&input)?;
            let (kernel, report) = kernel_report(&phi, &params)?;
            let output = output.unwrap_or_else(|| with_suffix(&input, ".kernel.cnf"));
            let trace_path = trace.unwrap_or_else(|| with_suffix(&input, ".trace.json"));
            write_file(&output, &kernel.to_dimacs())?;
            write_file(&trace_path, &(report.trace.to_json() + "\n"))?;
            if params.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", summary(&report));
                println!("wrote {} and {}", output.display(), trace_path.display());
            }
        }
        Command::Solve {
            input,
            params,
            verify_exact,
            exact,
        } => {
            let phi = read_formula(&input)?;
            if exact {
                let (y, opt) = brute_force_opt(&phi, params.k, Budget(params.budget))?;
                if params.json {
                    let out = serde_json::json!({
                        "solution": y.vars().iter().map(|v| v.0 + 1).collect::<Vec<_>>(),
                        "value": opt,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                } else {
                    println!("solution {}", y.to_dimacs());
                    println!("value {opt}");
                }
                return Ok(());
            }
            let pipeline = params.pipeline()?;
            let budget = Budget(params.budget);
            let (_, report) = kernel_report(&phi, &params)?;
            let y = fptas_solve_with(&phi, &pipeline, params.oracle, budget)?;
            let mut report = report.with_solution(&phi, &y);
            if verify_exact {
                report.opt = Some(brute_force_opt(&phi, params.k, budget)?.1);
            }
            if params.json {
                println!("{}", report.to_json());
            } else {
                println!("solution {}", y.to_dimacs());
                println!("value {}", phi.val(&y));
                if let Some(opt) = report.opt {
                    println!("opt {opt}");
                }
            }
        }
        Command::Lift {
            input,
            trace,
            solution,
            oracle,
            budget,
            json,
        } => {
            let phi = read_formula(&input)?;
            let text = fs::read_to_string(&trace)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", trace.display())))?;
            let t = KernelTrace::from_json(&text)
                .map_err(|e| Error::InvalidParameter(format!("bad trace: {e}")))?;
            if t.n_vars != phi.n_vars() {
                return Err(Error::InvalidParameter(format!(
                    "trace is for {} variables, instance has {}",
                    t.n_vars,
                    phi.n_vars()
                ))
                .into());
            }
            let y_kernel = parse_solution(&solution)?;
            let y = lift_solution(&t, &y_kernel, &phi, t.params.k, oracle, Budget(budget))?;
            if json {
                let out = serde_json::json!({
                    "solution": y.vars().iter().map(|v| v.0 + 1).collect::<Vec<_>>(),
                    "value": phi.val(&y),
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else {
                println!("solution {}", y.to_dimacs());
                println!("value {}", phi.val(&y));
            }
        }
        Command::Generate(g) => {
            let mut spec = GenSpec::new(g.n, g.m, g.a, g.b, g.seed);
            spec.k = g.k;
            spec.eps = g.eps;
            spec.max_width = g.max_width;
            spec.max_mult = g.max_mult;
            spec.neg_prob = g.neg_prob;
            if let Some(attempts) = g.attempts {
                spec.attempts = attempts;
            }
            let phi = random_formula(&spec)?;
            let text = spec.header_comment() + &phi.to_dimacs();
            match g.output {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Verify {
            input,
            params,
            trace,
        } => {
            let phi = read_formula(&input)?;
            let supplied = match trace {
                None => None,
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
                    Some(
                        KernelTrace::from_json(&text)
                            .map_err(|e| Error::InvalidParameter(format!("bad trace: {e}")))?,
                    )
                }
            };
            let report = verify_instance(
                &phi,
                &params.pipeline()?,
                params.oracle,
                Budget(params.budget),
                supplied.as_ref(),
            )?;
            if params.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            } else {
                print!("{}", report.to_text());
            }
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
        Command::CheckFree { input, a, b, json } => {
            let phi = read_formula(&input)?;
            let free = formula_is_kab_free(&phi, a, b);
            if json {
                println!("{}", serde_json::json!({ "a": a, "b": b, "free": free }));
            } else {
                println!("{}", if free { "free" } else { "not free" });
            }
            if !free {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(1),
    }
}
