//! Exact rational scalars, vectors, matrices and the linear-algebra and LP
//! primitives the decision procedures are built on.

mod definite;
mod linsolve;
mod lp;
mod matrix;
mod rat;

pub use definite::{is_pd, is_psd};
pub use linsolve::{kernel_basis, rank, solve_linear, SolutionSet};
pub use lp::{feasible_point, lp_min, LpOutcome};
pub use matrix::{RatMat, SymMat};
pub use rat::{parse_rat, parse_ratvec, rat, rat_from_f64, rat_to_f64, ratio, rats_to_strings, Rat, RatVec};
