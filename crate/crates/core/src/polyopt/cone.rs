use std::collections::BTreeSet;

use num_traits::Signed;

use crate::algebra::{kernel_basis, RatMat, RatVec};
use crate::error::{Error, Result};

/// Largest number of inequality rows for which extreme rays are enumerated.
pub const RAY_ENUMERATION_LIMIT: usize = 20;

/// Finite generating set of the polyhedral cone `{d : Bd <= 0, Fd = 0}`.
///
/// The result holds `±` a basis of the lineality space followed by the
/// extreme rays of the pointed part, all as primitive integer vectors, so
/// that the cone equals `{Σ λⱼ gⱼ : λ >= 0}`. An empty result means the cone
/// is `{0}`.
pub fn cone_generators(ineq: &[RatVec], eq: &[RatVec], dim: usize) -> Result<Vec<RatVec>> {
    if ineq.len() > RAY_ENUMERATION_LIMIT {
        return Err(Error::CapExceeded {
            what: "extreme ray enumeration",
            size: ineq.len(),
            cap: RAY_ENUMERATION_LIMIT,
        });
    }
    let all: Vec<Vec<_>> = ineq.iter().chain(eq).map(|r| r.0.clone()).collect();
    let lineality = if all.is_empty() {
        (0..dim).map(|i| RatVec::unit(dim, i)).collect()
    } else {
        kernel_basis(&RatMat::from_rows(all))
    };

    let mut out = Vec::new();
    for l in &lineality {
        let l = l.primitive_direction();
        out.push(l.clone());
        out.push(l.scale(&(-crate::algebra::rat(1))));
    }

    // Pointed part: intersect with the orthogonal complement of the lineality.
    let mut base: Vec<RatVec> = eq.to_vec();
    base.extend(lineality.iter().cloned());

    let mut rays = BTreeSet::new();
    let m = ineq.len();
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize >= dim {
            continue;
        }
        let mut rows: Vec<Vec<_>> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ineq[i].0.clone())
            .collect();
        rows.extend(base.iter().map(|r| r.0.clone()));
        let kernel = if rows.is_empty() {
            (0..dim).map(|i| RatVec::unit(dim, i)).collect()
        } else {
            kernel_basis(&RatMat::from_rows(rows))
        };
        if kernel.len() != 1 {
            continue;
        }
        let d = kernel[0].primitive_direction();
        for cand in [d.clone(), d.scale(&crate::algebra::rat(-1))] {
            if ineq.iter().all(|b| !b.dot(&cand).is_positive()) {
                rays.insert(cand);
            }
        }
    }
    out.extend(rays);
    Ok(out)
}
