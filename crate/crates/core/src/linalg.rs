//! Dense exact vectors, matrices, subspaces and affine maps.

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rational::{q, Rational};

pub type RVector = Vec<Rational>;

pub fn zeros(n: usize) -> RVector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> RVector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn add(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rational]) -> RVector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RVector {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// `Σ w_j v_j` over equally sized vectors; `dim` is used when the list is empty.
pub fn combination(dim: usize, weights: &[Rational], vs: &[RVector]) -> RVector {
    let mut out = zeros(dim);
    for (w, v) in weights.iter().zip(vs) {
        if w.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RVector>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<RVector>) -> Result<Self> {
        check_dim("matrix rows", rows, data.len())?;
        for r in &data {
            check_dim("matrix columns", cols, r.len())?;
        }
        Ok(RMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows that are known to have length `cols`.
    pub fn from_rows(cols: usize, data: Vec<RVector>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix rows");
        RMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        RMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: &[RVector]) -> Self {
        let data = (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        RMatrix {
            rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &RVector {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[RVector] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<RVector> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn column(&self, j: usize) -> RVector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        RMatrix {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols).map(|j| self.column(j)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        self.data.iter().map(|r| dot(r, v)).collect()
    }

    /// Row vector times matrix: `a^T M`.
    pub fn left_mul(&self, a: &[Rational]) -> RVector {
        assert_eq!(a.len(), self.rows, "vector-matrix dimension mismatch");
        let mut out = zeros(self.cols);
        for (ai, r) in a.iter().zip(&self.data) {
            if ai.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(r) {
                *o += ai * x;
            }
        }
        out
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        RMatrix {
            rows: self.rows,
            cols: other.cols,
            data: self.data.iter().map(|r| other.left_mul(r)).collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| scale(r, s)).collect(),
        }
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| add(a, b)).collect(),
        }
    }

    /// Stacks matrices side by side; all must share the row count.
    pub fn hstack(rows: usize, blocks: &[&RMatrix]) -> RMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let data = (0..rows)
            .map(|i| blocks.iter().flat_map(|b| b.data[i].iter().cloned()).collect())
            .collect();
        RMatrix { rows, cols, data }
    }

    pub fn vstack(cols: usize, blocks: &[&RMatrix]) -> RMatrix {
        let data: Vec<RVector> = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        RMatrix::from_rows(cols, data)
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[&RMatrix]) -> RMatrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::new();
        let mut off = 0;
        for b in blocks {
            for r in &b.data {
                let mut row = zeros(cols);
                row[off..off + b.cols].clone_from_slice(r);
                data.push(row);
            }
            off += b.cols;
        }
        RMatrix::from_rows(cols, data)
    }

    /// Columns `start..start+len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: len,
            data: self.data.iter().map(|r| r[start..start + len].to_vec()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<RMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = RMatrix::hstack(n, &[self, &RMatrix::identity(n)]);
        let (r, piv) = rref(&aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.column_block(n, n))
    }
}

/// Reduced row echelon form and pivot columns. Pivots are taken as the first
/// nonzero entry scanning downward, so the result is deterministic.
pub fn rref(m: &RMatrix) -> (RMatrix, Vec<usize>) {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (RMatrix { rows, cols, data: a }, pivots)
}

/// Some `x` with `Ax = b`, free variables set to zero; `None` if inconsistent.
pub fn solve_affine_system(a: &RMatrix, b: &[Rational]) -> Result<Option<RVector>> {
    check_dim("right-hand side", a.rows, b.len())?;
    let n = a.cols;
    let bcol = RMatrix::from_rows(1, b.iter().map(|x| vec![x.clone()]).collect());
    let aug = RMatrix::hstack(a.rows, &[a, &bcol]);
    let (r, piv) = rref(&aug);
    if piv.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = zeros(n);
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r.data[i][n].clone();
    }
    Ok(Some(x))
}

/// Basis of `{x : Ax = 0}`.
pub fn kernel_basis(a: &RMatrix) -> Subspace {
    let n = a.cols;
    let (r, piv) = rref(a);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let vecs = free
        .iter()
        .map(|&f| {
            let mut v = zeros(n);
            v[f] = Rational::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -r.data[i][f].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, vecs)
}

/// A linear subspace held in canonical form: its basis is the nonzero rows of
/// the reduced row echelon form of any spanning set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<RVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vecs: Vec<RVector>) -> Self {
        let m = RMatrix::from_rows(ambient, vecs);
        let (r, piv) = rref(&m);
        let basis = r.data.into_iter().take(piv.len()).collect();
        Subspace {
            ambient,
            basis,
            pivots: piv,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: vec![],
            pivots: vec![],
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<RVector> {
        assert_eq!(v.len(), self.ambient);
        let c: RVector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = combination(self.ambient, &c, &self.basis);
        if back.as_slice() == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Unit vectors on the non-pivot coordinates: a complement in reduced
    /// echelon position.
    pub fn echelon_complement(&self) -> Vec<RVector> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| unit(self.ambient, c))
            .collect()
    }

    /// `{a : a·w = 0 for all w}` as a subspace of the dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        kernel_basis(&RMatrix::from_rows(self.ambient, self.basis.clone()))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        kernel_basis(&RMatrix::from_rows(self.ambient, rows))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, v)
    }

    pub fn basis_matrix(&self) -> RMatrix {
        RMatrix::from_rows(self.ambient, self.basis.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: RMatrix,
    pub offset: RVector,
}

impl AffineMap {
    pub fn new(matrix: RMatrix, offset: RVector) -> Result<Self> {
        if matrix.rows() != offset.len() {
            return Err(Error::DimensionMismatch {
                context: "affine map offset".into(),
                expected: matrix.rows(),
                found: offset.len(),
            });
        }
        Ok(AffineMap { matrix, offset })
    }

    pub fn linear(matrix: RMatrix) -> Self {
        let offset = zeros(matrix.rows());
        AffineMap { matrix, offset }
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[Rational]) -> RVector {
        add(&self.matrix.mul_vec(x), &self.offset)
    }

    /// `M ∘ self` for a linear map `M`.
    pub fn then_linear(&self, m: &RMatrix) -> AffineMap {
        AffineMap {
            matrix: m.mul(&self.matrix),
            offset: m.mul_vec(&self.offset),
        }
    }

    pub fn shifted(&self, b: &[Rational]) -> AffineMap {
        AffineMap {
            matrix: self.matrix.clone(),
            offset: add(&self.offset, b),
        }
    }

    /// Stacks the outputs of several maps on the same input.
    pub fn stack(input_dim: usize, maps: &[&AffineMap]) -> AffineMap {
        let rows: usize = maps.iter().map(|m| m.output_dim()).sum();
        let mats: Vec<&RMatrix> = maps.iter().map(|m| &m.matrix).collect();
        let matrix = RMatrix::vstack(input_dim, &mats);
        debug_assert_eq!(matrix.rows(), rows);
        let offset = maps.iter().flat_map(|m| m.offset.iter().cloned()).collect();
        AffineMap { matrix, offset }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn solve_examples() {
        let id = RMatrix::identity(2);
        assert_eq!(
            solve_affine_system(&id, &[q(3), qf(-1, 2)]).unwrap(),
            Some(vec![q(3), qf(-1, 2)])
        );
        let a = RMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_affine_system(&a, &[q(1), q(3)]).unwrap(), None);
        let a = RMatrix::from_ints(&[&[2, 3], &[1, -1]]);
        assert_eq!(solve_affine_system(&a, &[q(5), q(0)]).unwrap(), Some(vec![q(1), q(1)]));
        assert!(solve_affine_system(&a, &[q(5)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RMatrix::identity(3)).dim(), 0);
        assert_eq!(kernel_basis(&RMatrix::zeros(1, 2)).dim(), 2);
        let k = kernel_basis(&RMatrix::from_ints(&[&[1, -1, 0]]));
        assert_eq!(
            k,
            Subspace::span(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]])
        );
    }

    #[test]
    fn inverse_and_rank() {
        let a = RMatrix::from_ints(&[&[2, 3], &[1, -1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RMatrix::identity(2));
        assert_eq!(RMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(), None);
        assert_eq!(RMatrix::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn subspace_ops() {
        let s = Subspace::span(3, vec![vec![q(1), q(-1), q(0)]]);
        assert!(s.contains(&[q(-2), q(2), q(0)]));
        assert!(!s.contains(&[q(1), q(0), q(0)]));
        assert_eq!(s.echelon_complement(), vec![unit(3, 1), unit(3, 2)]);
        let ann = s.annihilator();
        assert_eq!(ann.dim(), 2);
        let t = Subspace::span(3, vec![unit(3, 0), unit(3, 1)]);
        assert_eq!(s.intersect(&t), s);
        assert_eq!(s.sum(&t), t);
    }
}
