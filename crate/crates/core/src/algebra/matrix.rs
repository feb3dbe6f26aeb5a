use std::fmt;

use num_traits::{One, Zero};

use super::rat::{rat, Rat, RatVec};
use crate::error::{Error, Result};

/// Dense symmetric rational matrix. Only the upper triangle is stored, so the
/// matrix is symmetric by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMat {
    dim: usize,
    upper: Vec<Rat>,
}

#[inline]
fn packed(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMat needs dim >= 1");
        SymMat {
            dim,
            upper: vec![Rat::zero(); dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Rat::one())
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from full rows, rejecting asymmetric input.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {dim}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..dim {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Invalid(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j].clone()))
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.upper[packed(self.dim, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let idx = packed(self.dim, i, j);
        self.upper[idx] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn scale(&self, s: &Rat) -> SymMat {
        SymMat {
            dim: self.dim,
            upper: self.upper.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.dim, other.dim);
        SymMat {
            dim: self.dim,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn neg(&self) -> SymMat {
        self.scale(&rat(-1))
    }

    pub fn mul_vec(&self, x: &RatVec) -> RatVec {
        assert_eq!(self.dim, x.dim());
        RatVec(
            (0..self.dim)
                .map(|i| {
                    (0..self.dim).fold(Rat::zero(), |acc, j| {
                        if x[j].is_zero() {
                            acc
                        } else {
                            acc + self.get(i, j) * &x[j]
                        }
                    })
                })
                .collect(),
        )
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &RatVec) -> Rat {
        assert_eq!(self.dim, x.dim());
        let mut acc = Rat::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            acc += self.get(i, i) * &x[i] * &x[i];
            for j in i + 1..self.dim {
                if !x[j].is_zero() {
                    acc += rat(2) * self.get(i, j) * &x[i] * &x[j];
                }
            }
        }
        acc
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn principal(&self, idx: &[usize]) -> SymMat {
        SymMat::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    pub fn diagonal(&self) -> RatVec {
        RatVec((0..self.dim).map(|i| self.get(i, i).clone()).collect())
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.dim, other.dim);
        SymMat {
            dim: self.dim,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a * b).collect(),
        }
    }

    /// `x xᵀ`.
    pub fn outer(x: &RatVec) -> SymMat {
        SymMat::from_fn(x.dim(), |i, j| &x[i] * &x[j])
    }

    pub fn diag(d: &RatVec) -> SymMat {
        let mut m = SymMat::zeros(d.dim());
        for i in 0..d.dim() {
            m.set(i, i, d[i].clone());
        }
        m
    }

    /// `Rᵀ M R` for a dense `dim × k` matrix `R` given by columns.
    pub fn congruence(&self, cols: &[RatVec]) -> SymMat {
        let images: Vec<RatVec> = cols.iter().map(|c| self.mul_vec(c)).collect();
        SymMat::from_fn(cols.len(), |a, b| cols[a].dot(&images[b]))
    }

    pub fn to_dense(&self) -> RatMat {
        RatMat::from_rows(self.rows())
    }
}

impl fmt::Display for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dense general rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Rows must all have the same length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &RatVec) -> RatVec {
        assert_eq!(self.cols, x.dim());
        RatVec(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x.iter())
                        .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        )
    }
}
