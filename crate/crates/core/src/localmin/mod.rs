//! Local-minimizer existence decisions for the quartic form `p` and the
//! orthant program `min q(x) s.t. x >= 0`, second-order support enumeration,
//! exact point certification for general QPs, the descent falsifier and the
//! bounded-instance classifier.

mod bounded;
mod certify;
mod falsifier;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::{is_psd, kernel_basis, lp_min, LpOutcome, Rat, RatVec};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::polyopt::{simplex_minimum, Polytope};
use crate::quartic::QuarticInstance;
use crate::verdict::{ser_rat, Witness};

pub use bounded::{
    bounded_qp, classify_bounded_instance, dyadic_bound, orthant_qp, BoundedCase, Classification,
    ClassifyOptions, Confirmation, DEFAULT_BOUND_BITS,
};
pub use certify::{
    certify_qp_point, certify_qp_point_capped, improving_point, local_minimizers, verify_point_verdict,
    LocalMinimizers, NotLocalMinReason, PointVerdict,
};
pub use falsifier::{descent_falsifier, FalsifierConfig, FalsifierOutcome, ImprovingStep};

/// Support of a candidate nonzero second-order point, with a strictly
/// positive kernel vector `y` of the principal submatrix (`x_S = √y`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub indices: VertexSet,
    pub kernel_witness: RatVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalMinCertificate {
    /// `p` is positive definite: `q` has this strictly positive minimum over
    /// the simplex, so the origin is a strict local minimizer.
    OriginPd {
        #[serde(serialize_with = "ser_rat")]
        simplex_min: Rat,
    },
    /// KKT multipliers plus copositivity of `Q` on the critical cone.
    KktConeCopositive {
        active: Vec<usize>,
        multipliers: RatVec,
        equality_multipliers: RatVec,
        cone_generators: Vec<RatVec>,
        #[serde(serialize_with = "crate::verdict::ser_opt_rat")]
        cone_curvature_min: Option<Rat>,
    },
    /// Exact improving points found by descent at each tested radius.
    DescentSequence { radii: RatVec, points: Vec<RatVec> },
    /// No nonzero second-order point can exist (no admissible support) and
    /// `q(y) < 0` for the nonnegative `y`, so `p(s·√y) = s⁴q(y) < 0` for
    /// every `s > 0`: the origin is not a local minimizer either.
    SupportAnalysis { supports: Vec<SupportSet>, negative_direction: Witness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuarticDecision {
    pub answer: bool,
    pub strict: bool,
    pub certificate: LocalMinCertificate,
}

fn require_noninteger_k(inst: &QuarticInstance) -> Result<()> {
    if inst.k_is_integer() {
        return Err(Error::Invalid(format!(
            "k = {} is an integer; the existence characterization needs noninteger k",
            inst.k()
        )));
    }
    Ok(())
}

/// Does `p(x) = (x²)ᵀMx²` have a local minimizer?
///
/// For noninteger `k` a local minimizer exists iff `p` is positive definite,
/// in which case the origin is one and it is strict.
pub fn has_local_min_quartic(inst: &QuarticInstance) -> Result<QuarticDecision> {
    require_noninteger_k(inst)?;
    let m = inst.matrix();
    let (value, argmin) = simplex_minimum(m)?;
    if value.is_positive() {
        return Ok(QuarticDecision {
            answer: true,
            strict: true,
            certificate: LocalMinCertificate::OriginPd { simplex_min: value },
        });
    }
    // Prefer a visibly negative diagonal direction when there is one.
    let negative_direction = match (0..m.dim()).find(|&i| m.get(i, i).is_negative()) {
        Some(i) => Witness { point: RatVec::unit(m.dim(), i), value: m.get(i, i).clone() },
        None => Witness { point: argmin, value },
    };
    let supports = enumerate_sos_supports(inst)?;
    Ok(QuarticDecision {
        answer: false,
        strict: false,
        certificate: LocalMinCertificate::SupportAnalysis { supports, negative_direction },
    })
}

/// All supports `S` with `M_S ⪰ 0` and some `y > 0` in the kernel of `M_S`.
///
/// These are exactly the possible supports of nonzero second-order points of
/// `p`. Integer `k` is allowed here.
pub fn enumerate_sos_supports(inst: &QuarticInstance) -> Result<Vec<SupportSet>> {
    let n = inst.n();
    if n > crate::graph::ORACLE_LIMIT {
        return Err(Error::CapExceeded { what: "support enumeration", size: n, cap: crate::graph::ORACLE_LIMIT });
    }
    let m = inst.matrix();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = m.principal(&idx);
        if !is_psd(&sub).holds() {
            continue;
        }
        if let Some(y) = positive_kernel_vector(&sub.to_dense()) {
            out.push(SupportSet { indices: VertexSet::new(idx, n)?, kernel_witness: y });
        }
    }
    out.sort_by(|a, b| {
        a.indices.len().cmp(&b.indices.len()).then_with(|| a.indices.cmp(&b.indices))
    });
    Ok(out)
}

/// A vector `y` with every entry `>= 1` and `My = 0`, if one exists.
fn positive_kernel_vector(m: &crate::algebra::RatMat) -> Option<RatVec> {
    let basis = kernel_basis(m);
    if basis.is_empty() {
        return None;
    }
    let dim = m.ncols();
    // y = Σ tⱼ bⱼ with yᵢ >= 1, i.e. -Σ tⱼ bⱼᵢ <= -1.
    let mut poly = Polytope::free(basis.len());
    for i in 0..dim {
        let row = RatVec(basis.iter().map(|b| -b[i].clone()).collect());
        poly.push_inequality(row, -Rat::one());
    }
    match lp_min(&RatVec::zeros(basis.len()), &poly) {
        LpOutcome::Optimal { argmin: t, .. } => {
            let y = basis
                .iter()
                .zip(t.iter())
                .fold(RatVec::zeros(dim), |acc, (b, tj)| acc.add(&b.scale(tj)));
            Some(y)
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthantDecision {
    pub answer: bool,
    pub quartic: QuarticDecision,
}

/// Does `min q(x) s.t. x >= 0` (with `k = r - 1/2`) have a local minimizer?
///
/// Points of the orthant program correspond to squares of points of `p`
/// (`p(x) = q(x²)`), so the answer is the quartic one, routed entirely
/// through exact rational decisions.
pub fn has_local_min_qp_orthant(g: &Graph, r: usize) -> Result<OrthantDecision> {
    let inst = QuarticInstance::for_stable_set(g, r)?;
    let quartic = has_local_min_quartic(&inst)?;
    Ok(OrthantDecision { answer: quartic.answer, quartic })
}

/// Re-checks a quartic certificate independently of how it was produced.
pub fn verify_quartic_decision(inst: &QuarticInstance, d: &QuarticDecision) -> bool {
    match &d.certificate {
        LocalMinCertificate::OriginPd { simplex_min } => {
            d.answer
                && d.strict
                && simplex_min.is_positive()
                && crate::polyopt::is_pd_quartic(inst).map(|v| v.holds()).unwrap_or(false)
        }
        LocalMinCertificate::SupportAnalysis { supports, negative_direction } => {
            let w = negative_direction;
            !d.answer
                && w.point.is_nonnegative()
                && !w.point.is_zero()
                && inst.matrix().quad_form(&w.point) == w.value
                && w.value.is_negative()
                && supports.is_empty()
                && enumerate_sos_supports(inst).map(|s| s.is_empty()).unwrap_or(false)
        }
        _ => false,
    }
}

/// Checks the algebraic second-order conditions behind a support: `M_S y = 0`,
/// `y > 0`, `M_S ⪰ 0`.
pub fn verify_support(inst: &QuarticInstance, s: &SupportSet) -> bool {
    let sub = inst.matrix().principal(s.indices.members());
    s.kernel_witness.iter().all(|v| v.is_positive())
        && sub.mul_vec(&s.kernel_witness).is_zero()
        && is_psd(&sub).holds()
}

/// Scales a support witness into a full-length vector `y` with `y_S` the
/// kernel witness and zeros elsewhere.
pub fn embed_support(inst: &QuarticInstance, s: &SupportSet) -> RatVec {
    let mut y = RatVec::zeros(inst.n());
    for (a, &i) in s.indices.members().iter().enumerate() {
        y[i] = s.kernel_witness[a].clone();
    }
    y
}
