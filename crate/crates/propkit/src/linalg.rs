//! Dense matrices over the rationals.

use num_traits::{One, Zero};

use crate::rational::Q;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Result<Self> {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::arg(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for (j, x) in r.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Q) {
        self.data[i * self.cols + j] += x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Q> {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::arg(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::arg("vstack of matrices with different widths"));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form, with the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.rows = pivots.len();
        m.data.truncate(m.rows * m.cols);
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}` as the rows of the result, one per free
    /// column; the basis vector for free column `f` has a 1 at `f` and zeros
    /// at the other free columns.
    pub fn nullspace(&self) -> Matrix {
        self.nullspace_marked().0
    }

    /// [`Self::nullspace`] together with its free columns.
    pub fn nullspace_marked(&self) -> (Matrix, Vec<usize>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Q::one());
            for (i, &p) in pivots.iter().enumerate() {
                let x = r.get(i, f);
                if !x.is_zero() {
                    out.set(k, p, -x.clone());
                }
            }
        }
        (out, free)
    }
}

/// A subspace of `Q^n` held in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(rows: &Matrix) -> Self {
        let (basis, pivots) = rows.rref();
        Subspace { basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns not used as pivots; they index a basis of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient()).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduces `v` modulo the subspace; the result vanishes on all pivot columns.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, x) in self.basis.row(i).iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &f * x;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the quotient basis given by [`Self::free_columns`].
    pub fn quotient_coords(&self, v: &[Q]) -> Vec<Q> {
        let r = self.reduce(v);
        self.free_columns().into_iter().map(|c| r[c].clone()).collect()
    }

    /// Orthogonal complement under the bilinear form `Σ w_i x_i y_i`.
    pub fn complement(&self, weights: &[Q]) -> Subspace {
        let mut twisted = self.basis.clone();
        for i in 0..twisted.rows {
            for (j, w) in weights.iter().enumerate() {
                let x = twisted.get(i, j) * w;
                twisted.set(i, j, x);
            }
        }
        Subspace::span(&twisted.nullspace())
    }
}

/// Coordinates `c` with `v = Σ c_i · basis_i`, read off at the given
/// distinguished columns where the basis is the identity; the reconstruction
/// is checked exactly.
pub fn coordinates_at(basis: &Matrix, marks: &[usize], v: &[Q]) -> Option<Vec<Q>> {
    let c: Vec<Q> = marks.iter().map(|&m| v[m].clone()).collect();
    let mut w = vec![Q::zero(); basis.cols()];
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (j, x) in basis.row(i).iter().enumerate() {
            if !x.is_zero() {
                w[j] += ci * x;
            }
        }
    }
    (w == v).then_some(c)
}

/// A bounded chain complex `C_top -> ... -> C_0` of finite-dimensional
/// spaces; `differentials[k - 1]` is `d_k : C_k -> C_(k-1)`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        if differentials.len() + 1 != dims.len().max(1) {
            return Err(Error::arg("need one differential per positive degree"));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != dims[k + 1] || d.rows() != dims[k] {
                return Err(Error::arg(format!("d_{} has the wrong shape", k + 1)));
            }
        }
        Ok(ChainComplex { dims, differentials })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, k: usize) -> &Matrix {
        &self.differentials[k - 1]
    }

    /// The first `k` with `d_(k-1) d_k != 0`, if any.
    pub fn square_failure(&self) -> Option<usize> {
        (2..self.dims.len()).find(|&k| {
            !self
                .differential(k - 1)
                .mul(self.differential(k))
                .expect("shapes agree")
                .is_zero()
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Betti numbers `dim C_k - rank d_k - rank d_(k+1)`.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(Matrix::rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = if k == 0 { 0 } else { ranks[k - 1] };
                let inc = ranks.get(k).copied().unwrap_or(0);
                self.dims[k] - out - inc
            })
            .collect()
    }
}
