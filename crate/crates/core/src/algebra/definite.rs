//! Exact semidefiniteness and definiteness tests.
//!
//! Symmetric pivoted elimination over the rationals. Each eliminated pivot
//! updates a basis `t_j` so that the running Schur complement always equals
//! `t_jᵀ M t_k` on the surviving indices; any sign failure in the complement
//! is therefore a failure of `M` itself at a recoverable point.

use num_traits::{One, Signed, Zero};

use super::matrix::SymMat;
use super::rat::{rat, Rat, RatVec};
use crate::verdict::{Verdict, Witness};

pub fn is_psd(m: &SymMat) -> Verdict {
    eliminate(m, false)
}

pub fn is_pd(m: &SymMat) -> Verdict {
    eliminate(m, true)
}

fn witness(m: &SymMat, v: RatVec) -> Verdict {
    let point = v.primitive_direction();
    let value = m.quad_form(&point);
    Verdict::Fails(Witness { point, value })
}

fn eliminate(m: &SymMat, strict: bool) -> Verdict {
    let n = m.dim();
    let mut s: Vec<Vec<Rat>> = m.rows();
    let mut basis: Vec<RatVec> = (0..n).map(|i| RatVec::unit(n, i)).collect();
    let mut active: Vec<usize> = (0..n).collect();

    loop {
        for &i in &active {
            let d = &s[i][i];
            if d.is_negative() {
                return witness(m, basis[i].clone());
            }
            if d.is_zero() {
                if strict {
                    return witness(m, basis[i].clone());
                }
                if let Some(&j) = active.iter().find(|&&j| j != i && !s[i][j].is_zero()) {
                    // (s t_i + t_j)ᵀ M (s t_i + t_j) = 2 s S_ij + S_jj = -1.
                    let step = -(&s[j][j] + Rat::one()) / (rat(2) * &s[i][j]);
                    let v = basis[i].scale(&step).add(&basis[j]);
                    return witness(m, v);
                }
            }
        }
        // Zero diagonals here have zero rows and drop out.
        active.retain(|&i| !s[i][i].is_zero());
        let Some(&p) = active.first() else {
            return Verdict::Holds;
        };
        active.remove(0);
        let pivot = s[p][p].clone();
        for &j in &active {
            if s[p][j].is_zero() {
                continue;
            }
            let f = &s[p][j] / &pivot;
            basis[j] = basis[j].sub(&basis[p].scale(&f));
        }
        for a in 0..active.len() {
            let j = active[a];
            if s[p][j].is_zero() {
                continue;
            }
            for &k in &active[a..] {
                if s[p][k].is_zero() {
                    continue;
                }
                let upd = &s[p][j] * &s[p][k] / &pivot;
                s[j][k] -= &upd;
                if j != k {
                    s[k][j] = s[j][k].clone();
                }
            }
        }
    }
}
