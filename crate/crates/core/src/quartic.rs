//! The graph-derived matrix `M = kA + kI - J`, its quadratic form
//! `q(x) = xᵀ M x` and quartic form `p(x) = (x²)ᵀ M x²`.

use num_traits::{One, Signed, Zero};

use crate::algebra::{ratio, Rat, RatVec, SymMat};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticInstance {
    matrix: SymMat,
    k: Rat,
    graph: Graph,
    r: Option<usize>,
}

impl QuarticInstance {
    /// Builds `M = kA + kI - J` for `k > 0`.
    pub fn build(graph: &Graph, k: Rat) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::Invalid(format!("k must be positive, got {k}")));
        }
        let km1 = &k - Rat::one();
        let minus_one = -Rat::one();
        let matrix = SymMat::from_fn(graph.n(), |i, j| {
            if i == j || graph.adjacent(i, j) {
                km1.clone()
            } else {
                minus_one.clone()
            }
        });
        Ok(QuarticInstance { matrix, k, graph: graph.clone(), r: None })
    }

    /// The reduction instance with `k = r - 1/2`, `1 <= r <= n`.
    pub fn for_stable_set(graph: &Graph, r: usize) -> Result<Self> {
        check_r(graph, r)?;
        let k = Rat::from_integer(r.into()) - ratio(1, 2);
        let mut inst = Self::build(graph, k)?;
        inst.r = Some(r);
        Ok(inst)
    }

    pub(crate) fn from_parts(matrix: SymMat, k: Rat, graph: Graph, r: Option<usize>) -> Result<Self> {
        let rebuilt = Self::build(&graph, k)?;
        if rebuilt.matrix != matrix {
            return Err(Error::Invalid("matrix does not equal kA + kI - J for the stated graph and k".into()));
        }
        if let Some(r) = r {
            check_r(&graph, r)?;
            if rebuilt.k != Rat::from_integer(r.into()) - ratio(1, 2) {
                return Err(Error::Invalid(format!("k = {} is not r - 1/2 for r = {r}", rebuilt.k)));
            }
        }
        Ok(QuarticInstance { r, ..rebuilt })
    }

    pub fn matrix(&self) -> &SymMat {
        &self.matrix
    }

    pub fn k(&self) -> &Rat {
        &self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn r(&self) -> Option<usize> {
        self.r
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Integer `k` lies outside the noninteger hypothesis of the existence
    /// characterization; such instances are flagged, not rejected.
    pub fn k_is_integer(&self) -> bool {
        self.k.is_integer()
    }

    fn check_dim(&self, x: &RatVec) -> Result<()> {
        if x.dim() != self.n() {
            return Err(Error::Dimension(format!(
                "point has {} entries, instance has n = {}",
                x.dim(),
                self.n()
            )));
        }
        Ok(())
    }

    pub fn eval_q(&self, x: &RatVec) -> Result<Rat> {
        self.check_dim(x)?;
        Ok(self.matrix.quad_form(x))
    }

    pub fn eval_p(&self, x: &RatVec) -> Result<Rat> {
        self.check_dim(x)?;
        Ok(self.matrix.quad_form(&x.squared()))
    }

    /// `∇p(x) = 4 x ⊙ M x²`.
    pub fn grad_p(&self, x: &RatVec) -> Result<RatVec> {
        self.check_dim(x)?;
        let mx2 = self.matrix.mul_vec(&x.squared());
        let four = Rat::from_integer(4.into());
        Ok(RatVec(
            x.iter().zip(mx2.iter()).map(|(a, b)| &four * a * b).collect(),
        ))
    }

    /// `∇²p(x) = 8 M ⊙ x xᵀ + 4 Diag(M x²)`.
    pub fn hess_p(&self, x: &RatVec) -> Result<SymMat> {
        self.check_dim(x)?;
        let mx2 = self.matrix.mul_vec(&x.squared());
        let outer = SymMat::outer(x);
        let mut h = self.matrix.hadamard(&outer).scale(&Rat::from_integer(8.into()));
        let four = Rat::from_integer(4.into());
        for i in 0..self.n() {
            let d = h.get(i, i) + &four * &mx2[i];
            h.set(i, i, d);
        }
        Ok(h)
    }
}

fn check_r(graph: &Graph, r: usize) -> Result<()> {
    if r == 0 || r > graph.n() {
        return Err(Error::Invalid(format!("r must satisfy 1 <= r <= n = {}, got {r}", graph.n())));
    }
    Ok(())
}

/// Adjacency matrix `A` as a rational symmetric matrix.
pub fn adjacency_matrix(g: &Graph) -> SymMat {
    SymMat::from_fn(g.n(), |i, j| {
        if g.adjacent(i, j) {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn k2() -> QuarticInstance {
        QuarticInstance::build(&Graph::complete(2).unwrap(), ratio(3, 2)).unwrap()
    }

    fn empty2() -> QuarticInstance {
        QuarticInstance::build(&Graph::empty(2).unwrap(), ratio(1, 2)).unwrap()
    }

    fn single() -> QuarticInstance {
        QuarticInstance::build(&Graph::empty(1).unwrap(), rat(1)).unwrap()
    }

    #[test]
    fn build_examples() {
        let h = ratio(1, 2);
        assert_eq!(k2().matrix().rows(), vec![vec![h.clone(), h.clone()], vec![h.clone(), h]]);
        assert_eq!(
            empty2().matrix().rows(),
            vec![vec![ratio(-1, 2), rat(-1)], vec![rat(-1), ratio(-1, 2)]]
        );
        assert_eq!(single().matrix().rows(), vec![vec![rat(0)]]);
        assert!(single().k_is_integer());
        assert!(!k2().k_is_integer());
    }

    #[test]
    fn build_rejects_nonpositive_k() {
        let g = Graph::complete(2).unwrap();
        assert!(QuarticInstance::build(&g, rat(0)).is_err());
        assert!(QuarticInstance::build(&g, ratio(-1, 2)).is_err());
    }

    #[test]
    fn stable_set_instance_sets_k() {
        let inst = QuarticInstance::for_stable_set(&Graph::complete(2).unwrap(), 2).unwrap();
        assert_eq!(inst.k(), &ratio(3, 2));
        assert_eq!(inst.r(), Some(2));
        assert!(QuarticInstance::for_stable_set(&Graph::complete(2).unwrap(), 3).is_err());
        assert!(QuarticInstance::for_stable_set(&Graph::complete(2).unwrap(), 0).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let ones = RatVec::from_ints(&[1, 1]);
        assert_eq!(k2().eval_q(&ones).unwrap(), rat(2));
        assert_eq!(k2().eval_p(&ones).unwrap(), rat(2));
        assert_eq!(k2().eval_p(&RatVec::zeros(2)).unwrap(), rat(0));
        assert_eq!(empty2().eval_q(&RatVec::from_ints(&[1, 0])).unwrap(), ratio(-1, 2));
        assert!(k2().eval_q(&RatVec::zeros(3)).is_err());
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(k2().grad_p(&RatVec::from_ints(&[1, 1])).unwrap(), RatVec::from_ints(&[4, 4]));
        assert_eq!(k2().grad_p(&RatVec::zeros(2)).unwrap(), RatVec::zeros(2));
        assert_eq!(
            empty2().grad_p(&RatVec::from_ints(&[1, 0])).unwrap(),
            RatVec::from_ints(&[-2, 0])
        );
    }

    #[test]
    fn hessian_examples() {
        // 8 M ⊙ J + 4 Diag(M 1) = 8 * [[1/2,1/2],[1/2,1/2]] + 4 I.
        assert_eq!(
            k2().hess_p(&RatVec::from_ints(&[1, 1])).unwrap(),
            SymMat::from_int_rows(&[&[8, 4], &[4, 8]]).unwrap()
        );
        assert_eq!(k2().hess_p(&RatVec::zeros(2)).unwrap(), SymMat::zeros(2));
        assert_eq!(single().hess_p(&RatVec::from_ints(&[5])).unwrap(), SymMat::zeros(1));
    }

    #[test]
    fn rejects_matrix_inconsistent_with_graph() {
        let g = Graph::complete(2).unwrap();
        let wrong = SymMat::zeros(2);
        assert!(QuarticInstance::from_parts(wrong, ratio(3, 2), g, None).is_err());
    }
}
