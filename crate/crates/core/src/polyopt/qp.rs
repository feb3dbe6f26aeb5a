use num_traits::{One, Signed, Zero};

use super::cone::cone_generators;
use super::polytope::{Polytope, QpInstance};
use crate::algebra::{lp_min, rat, LpOutcome, Rat, RatMat, RatVec, SolutionSet, SymMat, solve_linear};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quartic::{adjacency_matrix, QuarticInstance};
use crate::verdict::{Verdict, Witness};

/// Default dimension cap for active-set enumeration.
pub const QP_DIM_CAP: usize = 12;

/// Largest number of inequalities accepted by the enumerator (2^m active sets).
pub const QP_CONSTRAINT_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QpOutcome {
    Minimum { value: Rat, argmin: RatVec },
    Unbounded,
    Infeasible,
}

impl QpOutcome {
    pub fn minimum(&self) -> Option<(&Rat, &RatVec)> {
        match self {
            QpOutcome::Minimum { value, argmin } => Some((value, argmin)),
            _ => None,
        }
    }
}

pub fn exact_qp_min(qp: &QpInstance) -> Result<QpOutcome> {
    exact_qp_min_capped(qp, QP_DIM_CAP)
}

/// Global minimum of `xᵀQx + cᵀx` over the polytope by active-set enumeration.
///
/// Every subset `W` of inequalities is treated as tight and the stationarity
/// system `2Qx + c + A_Wᵀλ + Eᵀμ = 0, A_W x = b_W, Ex = e` is solved exactly.
/// On any solution of that system the objective equals
/// `½cᵀx - ½b_Wᵀλ - ½eᵀμ`, a linear functional of the solution, so affine
/// solution families are minimized with an LP over their feasible part.
/// The least candidate wins; ties go to the lexicographically smallest point.
pub fn exact_qp_min_capped(qp: &QpInstance, cap: usize) -> Result<QpOutcome> {
    let n = qp.dim();
    if n > cap {
        return Err(Error::CapExceeded { what: "exact QP minimization", size: n, cap });
    }
    let ineq = qp.feasible.inequalities();
    if ineq.len() > QP_CONSTRAINT_CAP {
        return Err(Error::CapExceeded {
            what: "active-set enumeration",
            size: ineq.len(),
            cap: QP_CONSTRAINT_CAP,
        });
    }

    let mut candidates: Vec<(Rat, RatVec)> = Vec::new();
    let m = ineq.len();
    for mask in 0u64..(1u64 << m) {
        let active: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if active.len() > n {
            continue;
        }
        match stationary_family_min(qp, &active)? {
            FamilyMin::None => {}
            FamilyMin::Point(v, x) => candidates.push((v, x)),
            FamilyMin::Unbounded => return Ok(QpOutcome::Unbounded),
        }
    }

    if candidates.is_empty() {
        // A nonempty polytope always yields a stationary candidate unless the
        // objective is unbounded along it.
        return Ok(match crate::algebra::feasible_point(&qp.feasible) {
            None => QpOutcome::Infeasible,
            Some(_) => QpOutcome::Unbounded,
        });
    }

    if recession_unbounded(qp, &candidates)? {
        return Ok(QpOutcome::Unbounded);
    }

    let (value, argmin) = candidates
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("nonempty");
    Ok(QpOutcome::Minimum { value, argmin })
}

enum FamilyMin {
    None,
    Point(Rat, RatVec),
    Unbounded,
}

/// Stacked stationarity system in `(x, λ, μ)` for the active set `active`.
pub(crate) fn stationarity_system(qp: &QpInstance, active: &[usize]) -> (RatMat, RatVec) {
    let n = qp.dim();
    let ineq = qp.feasible.inequalities();
    let eq = qp.feasible.equalities();
    let w = active.len();
    let size = n + w + eq.len();
    let two = rat(2);

    let mut rows = vec![vec![Rat::zero(); size]; size];
    let mut rhs = RatVec::zeros(size);
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = &two * qp.q.get(i, j);
        }
        for (a, &ai) in active.iter().enumerate() {
            rows[i][n + a] = ineq[ai].0[i].clone();
        }
        for (e, (row, _)) in eq.iter().enumerate() {
            rows[i][n + w + e] = row[i].clone();
        }
        rhs[i] = -qp.c[i].clone();
    }
    for (a, &ai) in active.iter().enumerate() {
        for j in 0..n {
            rows[n + a][j] = ineq[ai].0[j].clone();
        }
        rhs[n + a] = ineq[ai].1.clone();
    }
    for (e, (row, b)) in eq.iter().enumerate() {
        for j in 0..n {
            rows[n + w + e][j] = row[j].clone();
        }
        rhs[n + w + e] = b.clone();
    }
    (RatMat::from_rows(rows), rhs)
}

fn stationary_family_min(qp: &QpInstance, active: &[usize]) -> Result<FamilyMin> {
    let n = qp.dim();
    let ineq = qp.feasible.inequalities();
    let eq = qp.feasible.equalities();
    let w = active.len();
    let size = n + w + eq.len();
    let two = rat(2);
    let (system, rhs) = stationarity_system(qp, active);

    let half = Rat::one() / &two;
    // Objective as a linear functional of the stacked solution (x, λ, μ).
    let mut functional = RatVec::zeros(size);
    for j in 0..n {
        functional[j] = &half * &qp.c[j];
    }
    for (a, &ai) in active.iter().enumerate() {
        functional[n + a] = -(&half * &ineq[ai].1);
    }
    for (e, (_, b)) in eq.iter().enumerate() {
        functional[n + w + e] = -(&half * b);
    }

    match solve_linear(&system, &rhs)? {
        SolutionSet::Empty => Ok(FamilyMin::None),
        SolutionSet::Unique(z) => {
            let x = RatVec(z.0[..n].to_vec());
            if qp.feasible.contains(&x) {
                Ok(FamilyMin::Point(qp.objective(&x), x))
            } else {
                Ok(FamilyMin::None)
            }
        }
        SolutionSet::Affine { particular, basis } => {
            let d = basis.len();
            let px = RatVec(particular.0[..n].to_vec());
            let nx: Vec<RatVec> = basis.iter().map(|b| RatVec(b.0[..n].to_vec())).collect();
            // Feasibility of x(t) = px + Σ tⱼ nxⱼ for the non-active inequalities.
            let mut poly = Polytope::free(d);
            for (i, (a, b)) in ineq.iter().enumerate() {
                if active.contains(&i) {
                    continue;
                }
                let coeffs = RatVec(nx.iter().map(|v| a.dot(v)).collect());
                let slack = b - a.dot(&px);
                if coeffs.is_zero() {
                    if slack.is_negative() {
                        return Ok(FamilyMin::None);
                    }
                    continue;
                }
                poly.push_inequality(coeffs, slack);
            }
            let obj = RatVec(basis.iter().map(|b| functional.dot(b)).collect());
            match lp_min(&obj, &poly) {
                LpOutcome::Infeasible => Ok(FamilyMin::None),
                LpOutcome::Unbounded => Ok(FamilyMin::Unbounded),
                LpOutcome::Optimal { argmin: t, .. } => {
                    let x = nx
                        .iter()
                        .zip(t.iter())
                        .fold(px, |acc, (v, tj)| acc.add(&v.scale(tj)));
                    debug_assert!(qp.feasible.contains(&x));
                    Ok(FamilyMin::Point(qp.objective(&x), x))
                }
            }
        }
    }
}

/// Unboundedness along recession directions: negative curvature anywhere in
/// the recession cone, or a zero-curvature generator along which the
/// objective decreases from some candidate.
fn recession_unbounded(qp: &QpInstance, candidates: &[(Rat, RatVec)]) -> Result<bool> {
    let n = qp.dim();
    let ineq: Vec<RatVec> = qp.feasible.inequalities().iter().map(|(a, _)| a.clone()).collect();
    let eq: Vec<RatVec> = qp.feasible.equalities().iter().map(|(a, _)| a.clone()).collect();
    let gens = cone_generators(&ineq, &eq, n)?;
    if gens.is_empty() {
        return Ok(false);
    }
    let curvature = qp.q.congruence(&gens);
    if !is_copositive_capped(&curvature, QP_DIM_CAP.max(gens.len()))?.holds() {
        return Ok(true);
    }
    for d in &gens {
        if !qp.q.quad_form(d).is_zero() {
            continue;
        }
        if candidates.iter().any(|(_, x)| qp.gradient(x).dot(d).is_negative()) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact minimum of `xᵀMx` over the standard simplex.
pub fn simplex_minimum(m: &SymMat) -> Result<(Rat, RatVec)> {
    simplex_minimum_capped(m, QP_DIM_CAP)
}

/// Enumerates supports `S`: on the face `{y_S >= 0, Σy = 1}` a stationary
/// point solves `2M_S y + λ1 = 0, 1ᵀy = 1`, where `yᵀMy = -λ/2`.
pub fn simplex_minimum_capped(m: &SymMat, cap: usize) -> Result<(Rat, RatVec)> {
    let n = m.dim();
    if n > cap {
        return Err(Error::CapExceeded { what: "simplex minimization", size: n, cap });
    }
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let two = rat(2);
    let mut best: Option<(Rat, RatVec)> = None;
    for mask in 1u64..(1u64 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let s = idx.len();
        let mut rows = vec![vec![Rat::zero(); s + 1]; s + 1];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                rows[a][b] = &two * m.get(i, j);
            }
            rows[a][s] = Rat::one();
            rows[s][a] = Rat::one();
        }
        let mut rhs = RatVec::zeros(s + 1);
        rhs[s] = Rat::one();
        let y = match solve_linear(&RatMat::from_rows(rows), &rhs)? {
            SolutionSet::Empty => continue,
            SolutionSet::Unique(z) => {
                if z.0[..s].iter().any(|v| v.is_negative()) {
                    continue;
                }
                RatVec(z.0[..s].to_vec())
            }
            SolutionSet::Affine { particular, basis } => {
                let mut poly = Polytope::free(basis.len());
                for a in 0..s {
                    poly.push_inequality(RatVec(basis.iter().map(|b| -b[a].clone()).collect()), particular[a].clone());
                }
                // Minimizing yᵀMy = -λ/2 is maximizing λ.
                let obj = RatVec(basis.iter().map(|b| -b[s].clone()).collect());
                match lp_min(&obj, &poly) {
                    LpOutcome::Optimal { argmin: t, .. } => {
                        let z = basis.iter().zip(t.iter()).fold(particular, |acc, (b, tj)| acc.add(&b.scale(tj)));
                        RatVec(z.0[..s].to_vec())
                    }
                    _ => continue,
                }
            }
        };
        let mut x = RatVec::zeros(n);
        for (a, &i) in idx.iter().enumerate() {
            x[i] = y[a].clone();
        }
        let v = m.quad_form(&x);
        let better = match &best {
            None => true,
            Some((bv, bx)) => v < *bv || (v == *bv && x < *bx),
        };
        if better {
            best = Some((v, x));
        }
    }
    Ok(best.expect("every vertex of the simplex is a candidate"))
}

/// Motzkin–Straus value: `max xᵀAx` over the simplex, with a maximizer.
pub fn ms_max(g: &Graph) -> Result<(Rat, RatVec)> {
    let (v, x) = simplex_minimum(&adjacency_matrix(g).neg())?;
    Ok((-v, x))
}

/// Copositivity of `M`, decided on the simplex cross-section of the orthant.
///
/// A negative diagonal entry is reported through its unit vector; otherwise
/// the witness is the simplex minimizer.
pub fn is_copositive(m: &SymMat) -> Result<Verdict> {
    is_copositive_capped(m, QP_DIM_CAP)
}

pub fn is_copositive_capped(m: &SymMat, cap: usize) -> Result<Verdict> {
    if let Some(i) = (0..m.dim()).find(|&i| m.get(i, i).is_negative()) {
        return Ok(Verdict::Fails(Witness {
            point: RatVec::unit(m.dim(), i),
            value: m.get(i, i).clone(),
        }));
    }
    let (value, point) = simplex_minimum_capped(m, cap)?;
    Ok(if value.is_negative() {
        Verdict::Fails(Witness { point, value })
    } else {
        Verdict::Holds
    })
}

/// Positive definiteness of the quartic form `p(x) = (x²)ᵀMx²`.
///
/// Substituting `y = x²` reduces this to `yᵀMy > 0` on the simplex. On
/// failure the witness is the `y`-vector; any `x` with `x² = y` has
/// `p(x) = q(y) <= 0`.
pub fn is_pd_quartic(inst: &QuarticInstance) -> Result<Verdict> {
    let m = inst.matrix();
    if let Some(i) = (0..m.dim()).find(|&i| !m.get(i, i).is_positive()) {
        return Ok(Verdict::Fails(Witness {
            point: RatVec::unit(m.dim(), i),
            value: m.get(i, i).clone(),
        }));
    }
    let (value, point) = simplex_minimum(m)?;
    Ok(if value.is_positive() {
        Verdict::Holds
    } else {
        Verdict::Fails(Witness { point, value })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn indefinite() -> SymMat {
        SymMat::from_int_rows(&[&[0, 1], &[1, -2]]).unwrap()
    }

    #[test]
    fn indefinite_over_simplex() {
        let (v, x) = simplex_minimum(&indefinite()).unwrap();
        assert_eq!(v, rat(-2));
        assert_eq!(x, RatVec::from_ints(&[0, 1]));
    }

    #[test]
    fn a_plus_i_over_simplex_for_k2() {
        let g = Graph::complete(2).unwrap();
        let m = adjacency_matrix(&g).add(&SymMat::identity(2));
        let (v, x) = simplex_minimum(&m).unwrap();
        assert_eq!(v, rat(1));
        // Every simplex point attains 1; ties break lexicographically.
        assert_eq!(m.quad_form(&RatVec(vec![ratio(1, 2), ratio(1, 2)])), rat(1));
        assert_eq!(x, RatVec::from_ints(&[0, 1]));
    }

    #[test]
    fn identity_over_simplex_is_barycenter() {
        let (v, x) = simplex_minimum(&SymMat::identity(3)).unwrap();
        assert_eq!(v, ratio(1, 3));
        assert_eq!(x, RatVec(vec![ratio(1, 3); 3]));
    }

    #[test]
    fn ms_examples() {
        assert_eq!(ms_max(&Graph::complete(3).unwrap()).unwrap().0, ratio(2, 3));
        assert_eq!(ms_max(&Graph::empty(3).unwrap()).unwrap().0, rat(0));
        assert_eq!(ms_max(&Graph::cycle(5).unwrap()).unwrap().0, ratio(1, 2));
    }

    #[test]
    fn copositivity_examples() {
        let v = is_copositive(&indefinite()).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.point, RatVec::from_ints(&[0, 1]));
        assert_eq!(w.value, rat(-2));

        assert!(is_copositive(&SymMat::ones(2).scale(&ratio(1, 2))).unwrap().holds());

        let inst = QuarticInstance::build(&Graph::empty(2).unwrap(), ratio(1, 2)).unwrap();
        let v = is_copositive(inst.matrix()).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.point, RatVec::from_ints(&[1, 0]));
        assert_eq!(w.value, ratio(-1, 2));
    }

    #[test]
    fn copositive_but_indefinite() {
        // [[0,1],[1,0]] is copositive yet not PSD.
        let m = SymMat::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(is_copositive(&m).unwrap().holds());
        assert!(!crate::algebra::is_psd(&m).holds());
    }

    #[test]
    fn quartic_pd_examples() {
        let k2 = QuarticInstance::build(&Graph::complete(2).unwrap(), ratio(3, 2)).unwrap();
        assert!(is_pd_quartic(&k2).unwrap().holds());
        assert_eq!(simplex_minimum(k2.matrix()).unwrap().0, ratio(1, 2));

        let e2 = QuarticInstance::build(&Graph::empty(2).unwrap(), ratio(1, 2)).unwrap();
        let v = is_pd_quartic(&e2).unwrap();
        assert_eq!(v.witness().unwrap().point, RatVec::from_ints(&[1, 0]));

        let single = QuarticInstance::build(&Graph::empty(1).unwrap(), rat(1)).unwrap();
        let v = is_pd_quartic(&single).unwrap();
        assert_eq!(v.witness().unwrap().point, RatVec::from_ints(&[1]));
        assert_eq!(v.witness().unwrap().value, rat(0));
    }

    #[test]
    fn unbounded_detection() {
        // -x² over x >= 0.
        let qp = QpInstance::form(SymMat::from_int_rows(&[&[-1]]).unwrap(), Polytope::orthant(1), "t").unwrap();
        assert_eq!(exact_qp_min(&qp).unwrap(), QpOutcome::Unbounded);
        // x1² - x2 over the orthant: zero curvature along e2 with negative slope.
        let qp = QpInstance::new(
            SymMat::from_int_rows(&[&[1, 0], &[0, 0]]).unwrap(),
            RatVec::from_ints(&[0, -1]),
            Polytope::orthant(2),
            "t",
        )
        .unwrap();
        assert_eq!(exact_qp_min(&qp).unwrap(), QpOutcome::Unbounded);
        // x1² + x2 over the orthant attains 0 at the origin.
        let qp = QpInstance::new(
            SymMat::from_int_rows(&[&[1, 0], &[0, 0]]).unwrap(),
            RatVec::from_ints(&[0, 1]),
            Polytope::orthant(2),
            "t",
        )
        .unwrap();
        assert_eq!(
            exact_qp_min(&qp).unwrap(),
            QpOutcome::Minimum { value: rat(0), argmin: RatVec::zeros(2) }
        );
    }

    #[test]
    fn infeasible_polytope() {
        let mut p = Polytope::simplex(2);
        p.push_inequality(RatVec::from_ints(&[1, 1]), ratio(1, 2));
        let qp = QpInstance::form(SymMat::identity(2), p, "t").unwrap();
        assert_eq!(exact_qp_min(&qp).unwrap(), QpOutcome::Infeasible);
    }

    #[test]
    fn dimension_cap_enforced() {
        let qp = QpInstance::form(SymMat::identity(13), Polytope::simplex(13), "t").unwrap();
        assert!(matches!(exact_qp_min(&qp), Err(Error::CapExceeded { .. })));
    }
}
