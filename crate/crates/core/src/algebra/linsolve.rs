use num_traits::{One, Zero};

use super::matrix::RatMat;
use super::rat::{Rat, RatVec};
use crate::error::{Error, Result};

/// Exact description of `{x : M x = rhs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    Unique(RatVec),
    /// `particular + span(basis)`, `basis` nonempty and linearly independent.
    Affine { particular: RatVec, basis: Vec<RatVec> },
    Empty,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }

    /// Particular solution, if any.
    pub fn point(&self) -> Option<&RatVec> {
        match self {
            SolutionSet::Unique(x) => Some(x),
            SolutionSet::Affine { particular, .. } => Some(particular),
            SolutionSet::Empty => None,
        }
    }

    pub fn kernel(&self) -> &[RatVec] {
        match self {
            SolutionSet::Affine { basis, .. } => basis,
            _ => &[],
        }
    }
}

/// Solves `M x = rhs` exactly by Gauss-Jordan elimination.
///
/// Free variables are set to zero in the particular solution; the kernel basis
/// has one vector per free variable with a 1 in that variable's slot.
pub fn solve_linear(m: &RatMat, rhs: &RatVec) -> Result<SolutionSet> {
    if m.nrows() != rhs.dim() {
        return Err(Error::Dimension(format!(
            "system has {} rows but rhs has {} entries",
            m.nrows(),
            rhs.dim()
        )));
    }
    let rows = m.nrows();
    let cols = m.ncols();
    // Augmented rows.
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(rhs[i].clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rat::one() / &a[r][c];
        for v in a[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }

    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(SolutionSet::Empty);
    }

    let mut particular = RatVec::zeros(cols);
    for (i, &c) in pivot_cols.iter().enumerate() {
        particular[c] = a[i][cols].clone();
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    if free.is_empty() {
        return Ok(SolutionSet::Unique(particular));
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = RatVec::zeros(cols);
            v[f] = Rat::one();
            for (i, &c) in pivot_cols.iter().enumerate() {
                v[c] = -a[i][f].clone();
            }
            v
        })
        .collect();
    Ok(SolutionSet::Affine { particular, basis })
}

/// Basis of `{x : M x = 0}` (empty when the kernel is trivial).
pub fn kernel_basis(m: &RatMat) -> Vec<RatVec> {
    let zero = RatVec::zeros(m.nrows());
    match solve_linear(m, &zero).expect("dimensions agree") {
        SolutionSet::Affine { basis, .. } => basis,
        _ => Vec::new(),
    }
}

/// Rank of `m`.
pub fn rank(m: &RatMat) -> usize {
    m.ncols() - kernel_basis(m).len()
}
