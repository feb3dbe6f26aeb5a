//! Exact two-phase simplex with Bland's rule over free variables.

use num_traits::{Signed, Zero};

use super::rat::{Rat, RatVec};
use crate::polyopt::Polytope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, argmin: RatVec },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Rat, &RatVec)> {
        match self {
            LpOutcome::Optimal { value, argmin } => Some((value, argmin)),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.ncols]
    }

    fn reduced_cost(&self, cost: &[Rat], j: usize) -> Rat {
        let mut z = cost[j].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                z -= cb * &row[j];
            }
        }
        z
    }

    /// Runs simplex iterations; `false` when the objective is unbounded below.
    fn run(&mut self, cost: &[Rat], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols)
                .filter(|&j| allowed[j] && !self.basis.contains(&j))
                .find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Minimizes `objectiveᵀ x` over a polytope (variables are free).
pub fn lp_min(objective: &RatVec, polytope: &Polytope) -> LpOutcome {
    let n = polytope.dim();
    assert_eq!(objective.dim(), n, "objective dimension mismatch");
    let ineq = polytope.inequalities();
    let eq = polytope.equalities();
    let m = ineq.len() + eq.len();
    if m == 0 {
        return if objective.is_zero() {
            LpOutcome::Optimal { value: Rat::zero(), argmin: RatVec::zeros(n) }
        } else {
            LpOutcome::Unbounded
        };
    }

    // Columns: u (n), w (n), slacks (ineq), artificials (m), then rhs.
    let n_slack = ineq.len();
    let art0 = 2 * n + n_slack;
    let ncols = art0 + m;
    let mut rows = Vec::with_capacity(m);
    for (r, (a, b)) in ineq.iter().chain(eq.iter()).enumerate() {
        let mut row = vec![Rat::zero(); ncols + 1];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        if r < n_slack {
            row[2 * n + r] = Rat::from_integer(1.into());
        }
        row[ncols] = b.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[art0 + r] = Rat::from_integer(1.into());
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis: (art0..art0 + m).collect(), ncols };

    let mut phase1 = vec![Rat::zero(); ncols];
    for c in phase1.iter_mut().skip(art0) {
        *c = Rat::from_integer(1.into());
    }
    let all = vec![true; ncols];
    tab.run(&phase1, &all);
    let infeas: Rat = (0..m)
        .filter(|&i| tab.basis[i] >= art0)
        .fold(Rat::zero(), |acc, i| acc + tab.rhs(i));
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining (zero-level) artificials out of the basis.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= art0 {
            match (0..art0).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art0).collect();
    if !tab.run(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![Rat::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs(i).clone();
    }
    let argmin = RatVec((0..n).map(|j| &z[j] - &z[n + j]).collect());
    let value = objective.dot(&argmin);
    LpOutcome::Optimal { value, argmin }
}

/// Some feasible point of the polytope, if one exists.
pub fn feasible_point(polytope: &Polytope) -> Option<RatVec> {
    match lp_min(&RatVec::zeros(polytope.dim()), polytope) {
        LpOutcome::Optimal { argmin, .. } => Some(argmin),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    #[test]
    fn min_first_coordinate_over_simplex() {
        let out = lp_min(&RatVec::from_ints(&[1, 0]), &Polytope::simplex(2));
        assert_eq!(
            out,
            LpOutcome::Optimal { value: rat(0), argmin: RatVec::from_ints(&[0, 1]) }
        );
    }

    #[test]
    fn min_sum_over_orthant_is_origin() {
        let out = lp_min(&RatVec::from_ints(&[1, 1]), &Polytope::orthant(2));
        assert_eq!(
            out,
            LpOutcome::Optimal { value: rat(0), argmin: RatVec::zeros(2) }
        );
    }

    #[test]
    fn unbounded_ray() {
        let out = lp_min(&RatVec::from_ints(&[-1, 0]), &Polytope::orthant(2));
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut p = Polytope::orthant(1);
        p.push_inequality(RatVec::from_ints(&[1]), rat(-1));
        assert_eq!(lp_min(&RatVec::from_ints(&[1]), &p), LpOutcome::Infeasible);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // min x + y s.t. x >= -3/2, y >= 2, x + y <= 10
        let mut p = Polytope::free(2);
        p.push_inequality(RatVec::from_ints(&[-1, 0]), ratio(3, 2));
        p.push_inequality(RatVec::from_ints(&[0, -1]), rat(-2));
        p.push_inequality(RatVec::from_ints(&[1, 1]), rat(10));
        let (v, x) = lp_min(&RatVec::from_ints(&[1, 1]), &p).optimal().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        assert_eq!(v, ratio(1, 2));
        assert_eq!(x, RatVec(vec![ratio(-3, 2), rat(2)]));
    }

    #[test]
    fn redundant_equalities() {
        let mut p = Polytope::simplex(2);
        p.push_equality(RatVec::from_ints(&[2, 2]), rat(2));
        let out = lp_min(&RatVec::from_ints(&[0, -1]), &p);
        assert_eq!(
            out,
            LpOutcome::Optimal { value: rat(-1), argmin: RatVec::from_ints(&[0, 1]) }
        );
    }
}
