use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::LocalMinCertificate;
use crate::algebra::{lp_min, solve_linear, LpOutcome, Rat, RatVec, SolutionSet};
use crate::error::{Error, Result};
use crate::polyopt::{cone_generators, is_copositive_capped, simplex_minimum_capped, stationarity_system, Polytope, QpInstance, QP_DIM_CAP, RAY_ENUMERATION_LIMIT};
use crate::verdict::ser_rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotLocalMinReason {
    /// Feasible direction along which the objective has negative slope.
    NotStationary {
        direction: RatVec,
        #[serde(serialize_with = "ser_rat")]
        slope: Rat,
    },
    /// Critical-cone direction (zero slope) with negative curvature.
    NegativeCurvature {
        direction: RatVec,
        #[serde(serialize_with = "ser_rat")]
        curvature: Rat,
    },
}

impl NotLocalMinReason {
    pub fn direction(&self) -> &RatVec {
        match self {
            NotLocalMinReason::NotStationary { direction, .. }
            | NotLocalMinReason::NegativeCurvature { direction, .. } => direction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PointVerdict {
    LocalMin { certificate: LocalMinCertificate },
    NotLocalMin { reason: NotLocalMinReason },
}

impl PointVerdict {
    pub fn is_local_min(&self) -> bool {
        matches!(self, PointVerdict::LocalMin { .. })
    }
}

pub fn certify_qp_point(qp: &QpInstance, x: &RatVec) -> Result<PointVerdict> {
    certify_qp_point_capped(qp, x, QP_DIM_CAP)
}

/// Exact local-minimality test for a feasible point of a QP.
///
/// `x` is a local minimizer iff it is a KKT point and `Q` is copositive on the
/// critical cone `{d : a_iᵀd <= 0 (i active), Ed = 0, ∇f(x)ᵀd = 0}`. The cone
/// is written as the image of the orthant under its generator matrix `R`, so
/// the copositivity question becomes one about `RᵀQR` on the simplex.
pub fn certify_qp_point_capped(qp: &QpInstance, x: &RatVec, cap: usize) -> Result<PointVerdict> {
    let n = qp.dim();
    if n > cap {
        return Err(Error::CapExceeded { what: "point certification", size: n, cap });
    }
    if x.dim() != n {
        return Err(Error::Dimension(format!("point has {} entries, QP has dim {n}", x.dim())));
    }
    if !qp.feasible.contains(x) {
        return Err(Error::Infeasible(format!("point {x} is not feasible")));
    }
    let g = qp.gradient(x);
    let active = qp.feasible.active_set(x);
    let ineq = qp.feasible.inequalities();
    let eq = qp.feasible.equalities();
    let active_rows: Vec<RatVec> = active.iter().map(|&i| ineq[i].0.clone()).collect();
    let eq_rows: Vec<RatVec> = eq.iter().map(|(a, _)| a.clone()).collect();

    // g + Σ λᵢ aᵢ + Σ μⱼ eⱼ = 0 with λ >= 0.
    let w = active.len();
    let vars = w + eq.len();
    let mut kkt = Polytope::free(vars);
    for i in 0..w {
        kkt.push_inequality(RatVec::unit(vars, i).scale(&-Rat::one()), Rat::zero());
    }
    for j in 0..n {
        let row = RatVec(active_rows.iter().chain(&eq_rows).map(|a| a[j].clone()).collect());
        kkt.push_equality(row, -g[j].clone());
    }
    let multipliers = match lp_min(&RatVec::zeros(vars), &kkt) {
        LpOutcome::Optimal { argmin, .. } => argmin,
        _ => {
            let (direction, slope) = descent_direction(&g, &active_rows, &eq_rows);
            return Ok(PointVerdict::NotLocalMin {
                reason: NotLocalMinReason::NotStationary { direction, slope },
            });
        }
    };

    let mut cone_eq = eq_rows.clone();
    cone_eq.push(g.clone());
    let generators = cone_generators(&active_rows, &cone_eq, n)?;
    let mut cone_curvature_min = None;
    if !generators.is_empty() {
        let curvature = qp.q.congruence(&generators);
        let (value, lambda) = simplex_minimum_capped(&curvature, RAY_ENUMERATION_LIMIT.max(cap))?;
        if value.is_negative() {
            let d = generators
                .iter()
                .zip(lambda.iter())
                .fold(RatVec::zeros(n), |acc, (r, l)| acc.add(&r.scale(l)))
                .integer_direction();
            let c = qp.q.quad_form(&d);
            return Ok(PointVerdict::NotLocalMin {
                reason: NotLocalMinReason::NegativeCurvature { direction: d, curvature: c },
            });
        }
        cone_curvature_min = Some(value);
    }

    Ok(PointVerdict::LocalMin {
        certificate: LocalMinCertificate::KktConeCopositive {
            active,
            multipliers: RatVec(multipliers.0[..w].to_vec()),
            equality_multipliers: RatVec(multipliers.0[w..].to_vec()),
            cone_generators: generators,
            cone_curvature_min,
        },
    })
}

/// Minimizes `gᵀd` over the tangent cone intersected with the unit box.
fn descent_direction(g: &RatVec, active: &[RatVec], eq: &[RatVec]) -> (RatVec, Rat) {
    let n = g.dim();
    let mut p = Polytope::free(n);
    for a in active {
        p.push_inequality(a.clone(), Rat::zero());
    }
    for e in eq {
        p.push_equality(e.clone(), Rat::zero());
    }
    for i in 0..n {
        p.push_inequality(RatVec::unit(n, i), Rat::one());
        p.push_inequality(RatVec::unit(n, i).scale(&-Rat::one()), Rat::one());
    }
    match lp_min(g, &p) {
        LpOutcome::Optimal { argmin, .. } => {
            let d = argmin.integer_direction();
            let slope = g.dot(&d);
            (d, slope)
        }
        // The box makes the LP bounded and d = 0 is feasible.
        other => unreachable!("descent LP returned {other:?}"),
    }
}

/// Exact feasible point `x + s·d` with strictly smaller objective, found by
/// halving `s` from 1. Works for any direction in the tangent cone with
/// negative slope, or zero slope and negative curvature.
pub fn improving_point(qp: &QpInstance, x: &RatVec, d: &RatVec) -> Option<RatVec> {
    let base = qp.objective(x);
    let mut s = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    for _ in 0..200 {
        let y = x.add(&d.scale(&s));
        if qp.feasible.contains(&y) && qp.objective(&y) < base {
            return Some(y);
        }
        s *= &half;
    }
    None
}

/// Independent re-check of a point verdict.
///
/// `NotLocalMin` is confirmed by producing an exact improving point along the
/// reported direction. `LocalMin` is confirmed by re-checking the KKT
/// identity, multiplier signs, that generators lie in the critical cone, and
/// copositivity of the projected curvature.
pub fn verify_point_verdict(qp: &QpInstance, x: &RatVec, v: &PointVerdict) -> bool {
    match v {
        PointVerdict::NotLocalMin { reason } => {
            let d = reason.direction();
            let tangent = qp.feasible.active_set(x).iter().all(|&i| !qp.feasible.inequalities()[i].0.dot(d).is_positive())
                && qp.feasible.equalities().iter().all(|(e, _)| e.dot(d).is_zero());
            tangent && improving_point(qp, x, d).is_some()
        }
        PointVerdict::LocalMin { certificate } => {
            let LocalMinCertificate::KktConeCopositive { active, multipliers, equality_multipliers, cone_generators, .. } = certificate else {
                return false;
            };
            let ineq = qp.feasible.inequalities();
            let eq = qp.feasible.equalities();
            let g = qp.gradient(x);
            let mut residual = g.clone();
            for (&i, l) in active.iter().zip(multipliers.iter()) {
                if l.is_negative() || ineq[i].0.dot(x) != ineq[i].1 {
                    return false;
                }
                residual = residual.add(&ineq[i].0.scale(l));
            }
            for ((e, _), m) in eq.iter().zip(equality_multipliers.iter()) {
                residual = residual.add(&e.scale(m));
            }
            if !residual.is_zero() {
                return false;
            }
            let in_cone = cone_generators.iter().all(|d| {
                g.dot(d).is_zero()
                    && active.iter().all(|&i| !ineq[i].0.dot(d).is_positive())
                    && eq.iter().all(|(e, _)| e.dot(d).is_zero())
            });
            in_cone
                && (cone_generators.is_empty()
                    || is_copositive_capped(&qp.q.congruence(cone_generators), RAY_ENUMERATION_LIMIT)
                        .map(|v| v.holds())
                        .unwrap_or(false))
        }
    }
}

/// Local minimizers found by enumerating stationary points of every face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalMinimizers {
    /// Isolated stationary points certified as local minimizers, sorted.
    pub points: Vec<RatVec>,
    /// Some face carries a positive-dimensional family of feasible
    /// stationary points, so `points` may not list every local minimizer.
    pub continuum: bool,
}

/// Every local minimizer of a QP is stationary on the affine hull of its
/// face, so enumerating stationary points face by face and certifying each
/// one finds them all, unless some face has a continuum of them.
pub fn local_minimizers(qp: &QpInstance) -> Result<LocalMinimizers> {
    let n = qp.dim();
    if n > QP_DIM_CAP {
        return Err(Error::CapExceeded { what: "local minimizer enumeration", size: n, cap: QP_DIM_CAP });
    }
    let m = qp.feasible.inequalities().len();
    let mut points = BTreeSet::new();
    let mut continuum = false;
    for mask in 0u64..(1u64 << m) {
        let active: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if active.len() > n {
            continue;
        }
        let (system, rhs) = stationarity_system(qp, &active);
        let x = match solve_linear(&system, &rhs)? {
            SolutionSet::Empty => continue,
            SolutionSet::Unique(z) => RatVec(z.0[..n].to_vec()),
            SolutionSet::Affine { particular, basis } => {
                let px = RatVec(particular.0[..n].to_vec());
                if basis.iter().any(|b| b.0[..n].iter().any(|v| !v.is_zero())) {
                    // Family moves in x: check whether it meets the polytope.
                    let nx: Vec<RatVec> = basis.iter().map(|b| RatVec(b.0[..n].to_vec())).collect();
                    let mut poly = Polytope::free(basis.len());
                    for (a, b) in qp.feasible.inequalities() {
                        poly.push_inequality(RatVec(nx.iter().map(|v| a.dot(v)).collect()), b - a.dot(&px));
                    }
                    if crate::algebra::feasible_point(&poly).is_some() {
                        continuum = true;
                    }
                    continue;
                }
                px
            }
        };
        if !qp.feasible.contains(&x) || points.contains(&x) {
            continue;
        }
        if certify_qp_point(qp, &x)?.is_local_min() {
            points.insert(x);
        }
    }
    Ok(LocalMinimizers { points: points.into_iter().collect(), continuum })
}
