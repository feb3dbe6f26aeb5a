use num_traits::{One, Zero};

use crate::algebra::{Rat, RatVec, SymMat};
use crate::error::{Error, Result};

/// `{x : aᵢᵀx <= bᵢ, eⱼᵀx = fⱼ}`. Boundedness is not assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    inequalities: Vec<(RatVec, Rat)>,
    equalities: Vec<(RatVec, Rat)>,
}

impl Polytope {
    /// All of `Rⁿ`.
    pub fn free(dim: usize) -> Self {
        Polytope { dim, inequalities: Vec::new(), equalities: Vec::new() }
    }

    /// `{x >= 0}`, written as `-xᵢ <= 0`.
    pub fn orthant(dim: usize) -> Self {
        let mut p = Self::free(dim);
        for i in 0..dim {
            p.push_inequality(RatVec::unit(dim, i).scale(&-Rat::one()), Rat::zero());
        }
        p
    }

    /// Standard simplex `{x >= 0, Σx = 1}`.
    pub fn simplex(dim: usize) -> Self {
        let mut p = Self::orthant(dim);
        p.push_equality(RatVec(vec![Rat::one(); dim]), Rat::one());
        p
    }

    /// `{x >= 0, Σx <= bound}`.
    pub fn capped_orthant(dim: usize, bound: Rat) -> Self {
        let mut p = Self::orthant(dim);
        p.push_inequality(RatVec(vec![Rat::one(); dim]), bound);
        p
    }

    pub fn push_inequality(&mut self, a: RatVec, b: Rat) {
        assert_eq!(a.dim(), self.dim, "constraint dimension mismatch");
        self.inequalities.push((a, b));
    }

    pub fn push_equality(&mut self, a: RatVec, b: Rat) {
        assert_eq!(a.dim(), self.dim, "constraint dimension mismatch");
        self.equalities.push((a, b));
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[(RatVec, Rat)] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[(RatVec, Rat)] {
        &self.equalities
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        x.dim() == self.dim
            && self.inequalities.iter().all(|(a, b)| a.dot(x) <= *b)
            && self.equalities.iter().all(|(a, b)| a.dot(x) == *b)
    }

    /// Indices of inequalities tight at `x`.
    pub fn active_set(&self, x: &RatVec) -> Vec<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| a.dot(x) == *b)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Quadratic program `min xᵀQx + cᵀx` over a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpInstance {
    pub q: SymMat,
    pub c: RatVec,
    pub feasible: Polytope,
    /// Free-form single-line note on where the instance came from.
    pub provenance: String,
}

impl QpInstance {
    pub fn new(q: SymMat, c: RatVec, feasible: Polytope, provenance: impl Into<String>) -> Result<Self> {
        let n = q.dim();
        if c.dim() != n || feasible.dim() != n {
            return Err(Error::Dimension(format!(
                "Q is {n}x{n}, c has {} entries, polytope has dim {}",
                c.dim(),
                feasible.dim()
            )));
        }
        let provenance = provenance.into();
        if provenance.contains('\n') {
            return Err(Error::Invalid("provenance must be a single line".into()));
        }
        Ok(QpInstance { q, c, feasible, provenance })
    }

    /// Homogeneous form `xᵀQx` over a polytope.
    pub fn form(q: SymMat, feasible: Polytope, provenance: impl Into<String>) -> Result<Self> {
        let n = q.dim();
        Self::new(q, RatVec::zeros(n), feasible, provenance)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn objective(&self, x: &RatVec) -> Rat {
        self.q.quad_form(x) + self.c.dot(x)
    }

    /// `2Qx + c`.
    pub fn gradient(&self, x: &RatVec) -> RatVec {
        self.q.mul_vec(x).scale(&Rat::from_integer(2.into())).add(&self.c)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.c.is_zero()
    }
}
