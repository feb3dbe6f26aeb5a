use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::certify::certify_qp_point_capped;
use super::falsifier::{descent_falsifier, FalsifierConfig};
use crate::algebra::{rat_from_f64, rat_to_f64, Rat, RatVec};
use crate::error::{Error, Result};
use crate::graph::{alpha, Graph, VertexSet};
use crate::polyopt::{Polytope, QpInstance, QP_DIM_CAP};
use crate::quartic::QuarticInstance;
use crate::verdict::ser_rat;

/// Default denominator exponent for the dyadic bound (denominator 2¹⁶).
pub const DEFAULT_BOUND_BITS: u32 = 16;

/// `min q(x) s.t. x >= 0` with `k = r - 1/2`.
pub fn orthant_qp(g: &Graph, r: usize) -> Result<QpInstance> {
    let inst = QuarticInstance::for_stable_set(g, r)?;
    QpInstance::form(
        inst.matrix().clone(),
        Polytope::orthant(g.n()),
        format!("qp-orthant r={r} k={}", inst.k()),
    )
}

/// `min q(x) s.t. x >= 0, Σx <= t` with `k = r - 1/2` and `t > 0`.
pub fn bounded_qp(g: &Graph, r: usize, t: Rat) -> Result<QpInstance> {
    if !t.is_positive() {
        return Err(Error::Invalid(format!(
            "bound t must be positive (t = {t} leaves only the origin feasible)"
        )));
    }
    let inst = QuarticInstance::for_stable_set(g, r)?;
    QpInstance::form(
        inst.matrix().clone(),
        Polytope::capped_orthant(g.n(), t.clone()),
        format!("bounded-qp r={r} k={} t={t}", inst.k()),
    )
}

/// Smallest `m / 2^bits` that is `>= 3 cⁿ √n`, for rational `c >= 0`.
pub fn dyadic_bound(c: &Rat, n: usize, bits: u32) -> Result<Rat> {
    if c.is_negative() {
        return Err(Error::Invalid(format!("c must be nonnegative, got {c}")));
    }
    let base = Rat::from_integer(3.into()) * num_traits::pow(c.clone(), n);
    let denom = BigInt::from(1) << bits;
    // m >= D·B·√n  ⟺  m² >= ⌈D²B²n⌉ for integer m >= 0.
    let target = Rat::from_integer(denom.clone() * &denom) * &base * &base * Rat::from_integer(n.into());
    let ceil = target.ceil().to_integer();
    let mut m = ceil.sqrt();
    if &m * &m < ceil {
        m += 1;
    }
    Ok(Rat::new(m, denom))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundedCase {
    /// `α(G) < k`: the origin is the unique local minimizer.
    OriginUnique,
    /// `α(G) > k`: every local minimizer lies on `Σx = t`.
    AllOnHyperplane,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub probes: usize,
    /// Run the empirical confirmation (skipped when `n` exceeds `cap`).
    pub confirm: bool,
    pub cap: usize,
    pub falsifier: FalsifierConfig,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            seed: 0,
            probes: 100,
            confirm: true,
            cap: QP_DIM_CAP,
            falsifier: FalsifierConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Confirmation {
    /// Exact certification of the origin (only in the origin case).
    pub origin_certified: Option<bool>,
    pub probes: usize,
    /// Probes at which the falsifier found exact descent at every radius.
    pub improved: usize,
    /// A probe off the hyperplane was certified as a local minimizer.
    pub second_minimizer: bool,
}

impl Confirmation {
    pub fn consistent(&self, case: BoundedCase) -> bool {
        match case {
            BoundedCase::OriginUnique => self.origin_certified == Some(true) && !self.second_minimizer,
            BoundedCase::AllOnHyperplane => self.improved == self.probes && !self.second_minimizer,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: BoundedCase,
    pub alpha: usize,
    pub alpha_witness: VertexSet,
    #[serde(serialize_with = "ser_rat")]
    pub k: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub t: Rat,
    pub confirmation: Option<Confirmation>,
}

/// Samples a nonzero feasible point of `x >= 0, Σx <= t`; with `strict` the
/// point also satisfies `Σx < t`.
fn sample_point(rng: &mut ChaCha8Rng, n: usize, t: &Rat, strict: bool) -> Vec<f64> {
    let tf = rat_to_f64(t);
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            continue;
        }
        let frac: f64 = if strict { rng.gen_range(0.01..0.99) } else { rng.gen_range(0.01..=1.0) };
        let x: Vec<f64> = raw.iter().map(|v| v / sum * frac * tf).collect();
        let exact: Option<Vec<Rat>> = x.iter().map(|&v| rat_from_f64(v)).collect();
        let Some(exact) = exact.map(RatVec) else { continue };
        let s = exact.sum();
        if exact.is_nonnegative() && !exact.is_zero() && (if strict { s < *t } else { s <= *t }) {
            return x;
        }
    }
}

/// Which structural case the bounded program falls in, decided by comparing
/// `α(G)` with `k = r - 1/2`, plus an optional empirical confirmation.
pub fn classify_bounded_instance(g: &Graph, r: usize, t: &Rat, opts: &ClassifyOptions) -> Result<Classification> {
    let qp = bounded_qp(g, r, t.clone())?;
    let (a, witness) = alpha(g)?;
    let k = Rat::from_integer(r.into()) - Rat::new(1.into(), 2.into());
    let case = if a < r { BoundedCase::OriginUnique } else { BoundedCase::AllOnHyperplane };

    let confirmation = if opts.confirm && g.n() <= opts.cap {
        Some(confirm(&qp, case, t, opts)?)
    } else {
        None
    };
    Ok(Classification { case, alpha: a, alpha_witness: witness, k, t: t.clone(), confirmation })
}

fn confirm(qp: &QpInstance, case: BoundedCase, t: &Rat, opts: &ClassifyOptions) -> Result<Confirmation> {
    let n = qp.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let origin_certified = match case {
        BoundedCase::OriginUnique => {
            Some(certify_qp_point_capped(qp, &RatVec::zeros(n), opts.cap)?.is_local_min())
        }
        BoundedCase::AllOnHyperplane => None,
    };
    let strict = case == BoundedCase::AllOnHyperplane;
    let mut improved = 0;
    let mut second_minimizer = false;
    for probe in 0..opts.probes {
        let x = sample_point(&mut rng, n, t, strict);
        let cfg = FalsifierConfig {
            seed: opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(probe as u64),
            ..opts.falsifier.clone()
        };
        if descent_falsifier(qp, &x, &cfg).improved() {
            improved += 1;
            continue;
        }
        // Inconclusive: settle it exactly.
        let exact = RatVec(x.iter().map(|&v| rat_from_f64(v).expect("finite")).collect());
        let off_hyperplane = exact.sum() != *t;
        if off_hyperplane && !exact.is_zero() && certify_qp_point_capped(qp, &exact, opts.cap)?.is_local_min() {
            second_minimizer = true;
        }
    }
    Ok(Confirmation { origin_certified, probes: opts.probes, improved, second_minimizer })
}
