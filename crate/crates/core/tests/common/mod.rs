//! Independent reference implementations used only by the tests.
#![allow(dead_code)]

use lmqp::algebra::{rat, Rat, RatVec, SymMat};
use lmqp::graph::Graph;
use lmqp::polyopt::Polytope;

fn zero() -> Rat {
    rat(0)
}

/// Determinant by the Leibniz permutation expansion.
pub fn det_leibniz(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, at: usize, m: &[Vec<Rat>], total: &mut Rat) {
    let n = perm.len();
    if at == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = rat(1);
        for (i, &p) in perm.iter().enumerate() {
            term *= &m[i][p];
        }
        if inversions % 2 == 1 {
            term = -term;
        }
        *total += term;
        return;
    }
    for i in at..n {
        perm.swap(at, i);
        permute(perm, at + 1, m, total);
        perm.swap(at, i);
    }
}

fn principal(m: &SymMat, idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| idx.iter().map(|&j| m.get(i, j).clone()).collect()).collect()
}

/// PSD iff every principal minor is nonnegative.
pub fn psd_by_minors(m: &SymMat) -> bool {
    let n = m.dim();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        det_leibniz(&principal(m, &idx)) >= zero()
    })
}

/// PD iff every leading principal minor is positive.
pub fn pd_by_minors(m: &SymMat) -> bool {
    (1..=m.dim()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        det_leibniz(&principal(m, &idx)) > zero()
    })
}

/// Unique solution of a square system by Cramer's rule, if nonsingular.
pub fn cramer(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let d = det_leibniz(a);
    if d == zero() {
        return None;
    }
    Some(
        (0..a.len())
            .map(|col| {
                let replaced: Vec<Vec<Rat>> = a
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut r = row.clone();
                        r[col] = bi.clone();
                        r
                    })
                    .collect();
                det_leibniz(&replaced) / &d
            })
            .collect(),
    )
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Minimum of a linear objective over a bounded polytope by vertex enumeration.
pub fn lp_by_vertices(obj: &RatVec, p: &Polytope) -> Option<Rat> {
    let n = p.dim();
    let rows: Vec<(RatVec, Rat)> = p.equalities().iter().chain(p.inequalities()).cloned().collect();
    let neq = p.equalities().len();
    let mut best: Option<Rat> = None;
    for extra in combinations(rows.len() - neq, n.saturating_sub(neq)) {
        let chosen: Vec<usize> = (0..neq).chain(extra.iter().map(|i| i + neq)).collect();
        if chosen.len() != n {
            continue;
        }
        let a: Vec<Vec<Rat>> = chosen.iter().map(|&i| rows[i].0 .0.clone()).collect();
        let b: Vec<Rat> = chosen.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = cramer(&a, &b) {
            let x = RatVec(x);
            if p.contains(&x) {
                let v = obj.dot(&x);
                if best.as_ref().is_none_or(|bv| v < *bv) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

/// Minimum of `xᵀQx + cᵀx` over the box `[lo, hi]ⁿ`: each coordinate is
/// pinned low, pinned high, or free, and the free block must have a unique
/// stationary point inside the box.
pub fn qp_box_min(q: &SymMat, c: &RatVec, lo: &Rat, hi: &Rat) -> Rat {
    let n = q.dim();
    let mut best: Option<Rat> = None;
    for code in 0..3u32.pow(n as u32) {
        let mut state = vec![0u32; n];
        let mut t = code;
        for s in state.iter_mut() {
            *s = t % 3;
            t /= 3;
        }
        let mut x = RatVec::zeros(n);
        for i in 0..n {
            x[i] = match state[i] {
                0 => lo.clone(),
                1 => hi.clone(),
                _ => zero(),
            };
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        if !free.is_empty() {
            // 2Q_FF x_F = -c_F - 2 Q_F,fixed x_fixed
            let a: Vec<Vec<Rat>> =
                free.iter().map(|&i| free.iter().map(|&j| rat(2) * q.get(i, j)).collect()).collect();
            let b: Vec<Rat> = free
                .iter()
                .map(|&i| {
                    let mut s = -c[i].clone();
                    for j in 0..n {
                        if state[j] != 2 {
                            s -= rat(2) * q.get(i, j) * &x[j];
                        }
                    }
                    s
                })
                .collect();
            let Some(sol) = cramer(&a, &b) else { continue };
            if sol.iter().any(|v| v < lo || v > hi) {
                continue;
            }
            for (&i, v) in free.iter().zip(sol) {
                x[i] = v;
            }
        }
        let v = q.quad_form(&x) + c.dot(&x);
        if best.as_ref().is_none_or(|bv| v < *bv) {
            best = Some(v);
        }
    }
    best.expect("vertices are always candidates")
}

/// Largest stable set by checking every vertex subset.
pub fn alpha_brute(g: &Graph) -> usize {
    let n = g.n();
    (0u32..(1 << n))
        .filter(|&mask| {
            (0..n).all(|u| (u + 1..n).all(|v| mask & (1 << u) == 0 || mask & (1 << v) == 0 || !g.adjacent(u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest clique by checking every vertex subset.
pub fn omega_brute(g: &Graph) -> usize {
    let n = g.n();
    (0u32..(1 << n))
        .filter(|&mask| {
            (0..n).all(|u| (u + 1..n).all(|v| mask & (1 << u) == 0 || mask & (1 << v) == 0 || g.adjacent(u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// `p(x) = Σ M_ij x_i² x_j²` in floating point.
pub fn p_f64(m: &[Vec<f64>], x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += m[i][j] * x[i] * x[i] * x[j] * x[j];
        }
    }
    s
}

pub fn to_f64_rows(m: &SymMat) -> Vec<Vec<f64>> {
    m.rows().iter().map(|r| r.iter().map(lmqp::algebra::rat_to_f64).collect()).collect()
}
