use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rat, UniPoly};
use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Reduced row-echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Particular solution of `a x = b` plus a basis of `ker a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has length {} but {cols} columns were declared", r.len())));
            }
            data.extend(r);
        }
        Ok(RatMatrix { rows: nrows, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| Rat::from_integer(rows[i][j].into()))
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn hstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn rref(&self) -> Rref {
        // integer Gauss-Jordan on primitive rows, divided by pivots at the end
        let mut rows: Vec<Vec<BigInt>> =
            (0..self.rows).map(|i| primitive_row(&self.data[i * self.cols..(i + 1) * self.cols])).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].bits()) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r);
            let (piv, tail) = tail.split_first_mut().expect("pivot row");
            for row in head.iter_mut().chain(tail.iter_mut()) {
                if row[c].is_zero() {
                    continue;
                }
                let g = piv[c].gcd(&row[c]);
                let a = &piv[c] / &g;
                let b = &row[c] / &g;
                for j in 0..self.cols {
                    if piv[j].is_zero() {
                        if !row[j].is_zero() {
                            row[j] *= &a;
                        }
                        continue;
                    }
                    let v = &row[j] * &a - &piv[j] * &b;
                    row[j] = v;
                }
                make_primitive(row);
            }
            pivots.push(c);
            r += 1;
        }
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for (i, row) in rows.into_iter().enumerate().take(r) {
            let p = row[pivots[i]].clone();
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_zero() {
                    m[(i, j)] = Rat::new(x, p.clone());
                }
            }
        }
        Rref { matrix: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let rref = self.rref();
        kernel_from_rref(&rref, self.cols)
    }

    /// Indices of a maximal linearly independent set of columns (leftmost first).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&RatMatrix::identity(n)).rref();
        if aug.rank < n || aug.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug.matrix[(i, n + j)].clone()))
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= d;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn max_abs_height(&self) -> num_bigint::BigInt {
        self.data.iter().map(|x| x.numer().abs().max(x.denom().clone())).max().unwrap_or_default()
    }
}

impl RatMatrix {
    /// Basis of the column space, as the independent columns of `self`.
    pub fn column_space(&self) -> RatMatrix {
        self.select_cols(&self.independent_columns())
    }

    pub fn pow(&self, k: usize) -> RatMatrix {
        assert!(self.is_square());
        let mut out = RatMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Minimal polynomial, found as the first linear dependency among powers.
    /// Least common multiple of the minimal polynomials of Krylov sequences of unit vectors.
    pub fn min_poly(&self) -> UniPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut invariant = RowSpace::new(n);
        let mut mu = UniPoly::one();
        for i in 0..n {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            if invariant.contains(&v) {
                continue;
            }
            let mut local = RowSpace::new(n);
            let mut chain = Vec::new();
            while local.insert(&v) {
                invariant.insert(&v);
                let next = self.mul_vec(&v);
                chain.push(std::mem::replace(&mut v, next));
            }
            let basis = RatMatrix::from_columns(n, &chain);
            let sol = solve_and_kernel(&basis, &v).expect("shapes agree").expect("dependent vector lies in the span");
            let mut coeffs: Vec<Rat> = sol.particular.into_iter().map(|c| -c).collect();
            coeffs.push(Rat::one());
            let p = UniPoly::new(coeffs);
            let g = mu.gcd(&p);
            mu = mu.mul(&p).div_rem(&g).0.monic();
        }
        mu
    }

    pub fn eval_poly(&self, f: &UniPoly) -> RatMatrix {
        let n = self.rows;
        let mut acc = RatMatrix::zeros(n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self).add(&RatMatrix::identity(n).scale(c));
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows).is_zero()
    }
}

/// Expresses vectors in a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    rows: Vec<usize>,
    inverse: RatMatrix,
    family: RatMatrix,
}

impl Coordinates {
    /// `family` holds the vectors as columns; they must be independent.
    pub fn new(family: RatMatrix) -> Self {
        let rows = family.transpose().independent_columns();
        assert_eq!(rows.len(), family.cols(), "family is not independent");
        let inverse = family.select_rows(&rows).inverse().expect("independent rows");
        Coordinates { rows, inverse, family }
    }

    pub fn len(&self) -> usize {
        self.family.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.family.cols() == 0
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let sub: Vec<Rat> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inverse.mul_vec(&sub);
        (self.family.mul_vec(&c) == v).then_some(c)
    }
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

fn primitive_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut out);
    out
}

pub(crate) fn kernel_from_rref(rref: &Rref, cols: usize) -> Vec<Vec<Rat>> {
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &p) in rref.pivots.iter().enumerate() {
            v[p] = -rref.matrix[(r, free)].clone();
        }
        basis.push(v);
    }
    basis
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Solves `a x = b`. Returns `Ok(None)` when the system is inconsistent.
pub fn solve_and_kernel(a: &RatMatrix, b: &[Rat]) -> Result<Option<LinearSolution>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!("system has {} rows but right-hand side has length {}", a.rows(), b.len())));
    }
    let bcol = RatMatrix::from_columns(a.rows(), &[b.to_vec()]);
    let aug = a.hstack(&bcol).rref();
    let n = a.cols();
    if aug.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = vec![Rat::zero(); n];
    for (r, &p) in aug.pivots.iter().enumerate() {
        particular[p] = aug.matrix[(r, n)].clone();
    }
    let restricted =
        Rref { matrix: aug.matrix.select_cols(&(0..n).collect::<Vec<_>>()), rank: aug.rank, pivots: aug.pivots.clone() };
    Ok(Some(LinearSolution { particular, kernel: kernel_from_rref(&restricted, n) }))
}

/// Solves `a X = b` column by column; `None` if any column is inconsistent.
pub fn solve_matrix(a: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(a.rows(), b.rows());
    let aug = a.hstack(b).rref();
    let n = a.cols();
    if aug.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = RatMatrix::zeros(n, b.cols());
    for (r, &p) in aug.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = aug.matrix[(r, n + j)].clone();
        }
    }
    Some(x)
}

/// Incrementally maintained row space, used to test membership and extract coordinates.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    dim: usize,
    // echelon rows with a leading 1 at `lead`; fully reduced against each other
    rows: Vec<(usize, Vec<Rat>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (lead, row) in &self.rows {
            if v[*lead].is_zero() {
                continue;
            }
            let f = v[*lead].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Inserts `v`; returns true if the rank grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[lead].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[lead].is_zero() {
                continue;
            }
            let f = row[lead].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((lead, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ri;

    #[test]
    fn rref_identity() {
        let r = RatMatrix::identity(2).rref();
        assert_eq!(r.matrix, RatMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_proportional_rows() {
        let r = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_permutation() {
        let r = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, RatMatrix::identity(2));
    }

    #[test]
    fn solve_identity() {
        let b = vec![ri(3), ri(-7)];
        let s = solve_and_kernel(&RatMatrix::identity(2), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn solve_zero_row() {
        let s = solve_and_kernel(&RatMatrix::zeros(1, 2), &[ri(0)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![ri(0), ri(0)]);
        assert_eq!(s.kernel.len(), 2);
    }

    #[test]
    fn solve_single_equation() {
        let a = RatMatrix::from_i64(&[&[1, 1]]);
        let s = solve_and_kernel(&a, &[ri(1)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![ri(1), ri(0)]);
        assert_eq!(s.kernel, vec![vec![ri(-1), ri(1)]]);
    }

    #[test]
    fn solve_inconsistent_and_mismatch() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(solve_and_kernel(&a, &[ri(1), ri(2)]).unwrap().is_none());
        assert!(solve_and_kernel(&a, &[ri(1)]).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), ri(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn row_space_membership() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&[ri(1), ri(2), ri(0)]));
        assert!(rs.insert(&[ri(0), ri(1), ri(1)]));
        assert!(!rs.insert(&[ri(1), ri(3), ri(1)]));
        assert!(rs.contains(&[ri(2), ri(5), ri(1)]));
        assert!(!rs.contains(&[ri(0), ri(0), ri(1)]));
    }
}
