//! Approximate kernelization for Max k-Weight SAT on formulas whose
//! variable-clause incidence graph excludes `K_{a,b}`.
//!
//! The pipeline in [`kernel`] shrinks a weighted formula to a kernel whose
//! size depends only on `k`, `eps`, `a` and `b`, while any solution of the
//! kernel lifts back to a solution of the original formula losing at most a
//! `(1 - eps)` factor.
//!
//! ```
//! use kabsat::{kernel, Budget, Formula, OracleKind, PipelineParams};
//! use kabsat::rational::ratio;
//!
//! let phi: Formula = "p mksat 3 2\n2 1 -2 0\n1 3 0\n".parse().unwrap();
//! let params = PipelineParams::new(1, ratio(1, 8), 2, 2).unwrap();
//! let y = kernel::fptas_solve(&phi, &params, Budget::default()).unwrap();
//! assert_eq!(phi.val(&y), 3);
//! # let _ = OracleKind::Exact;
//! ```

pub mod error;
pub mod formula;
pub mod generate;
pub mod graph;
pub mod kernel;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use formula::{brute_force_opt, Budget, Clause, Formula, Solution, VarId};
pub use graph::{find_sunflower, is_kab_free, Bigraph, Sunflower};
pub use kernel::{KernelTrace, PipelineParams};
pub use oracle::OracleKind;
pub use rational::Rational;
