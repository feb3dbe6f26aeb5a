//! Exact global minimization of quadratics over polytopes, and the
//! copositivity, clique and quartic-definiteness tests built on it.

mod cone;
mod polytope;
mod qp;

pub use cone::{cone_generators, RAY_ENUMERATION_LIMIT};
pub use polytope::{Polytope, QpInstance};
pub use qp::{
    exact_qp_min, exact_qp_min_capped, is_copositive, is_copositive_capped, is_pd_quartic, ms_max,
    simplex_minimum, simplex_minimum_capped, QpOutcome, QP_CONSTRAINT_CAP, QP_DIM_CAP,
};
pub(crate) use qp::stationarity_system;
