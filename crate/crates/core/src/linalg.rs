//! Exact dense linear algebra over Q and Q(α), integer lattices, Hermite
//! normal form and LLL reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numfield::FieldElem;
use crate::rational::{primitive_integer_vector, Q};

/// Exact field scalar. Elements carry enough context to build their own
/// zero and one (field elements know their parent field).
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_s(&self) -> bool;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    fn neg_s(&self) -> Self;
    /// Exact quotient; `o` must be nonzero.
    fn div_s(&self, o: &Self) -> Self;
    fn from_q_like(&self, q: &Q) -> Self;
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_s(&self) -> Self {
        -self
    }
    fn div_s(&self, o: &Self) -> Self {
        self / o
    }
    fn from_q_like(&self, q: &Q) -> Self {
        q.clone()
    }
}

impl Scalar for FieldElem {
    fn zero_like(&self) -> Self {
        FieldElem::zero(self.field())
    }
    fn one_like(&self) -> Self {
        FieldElem::one(self.field())
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_s(&self) -> Self {
        -self
    }
    fn div_s(&self, o: &Self) -> Self {
        self.checked_div(o).expect("division by zero")
    }
    fn from_q_like(&self, q: &Q) -> Self {
        FieldElem::from_q(self.field(), q.clone())
    }
}

/// Row-major dense matrix. `zero` is a prototype element so that empty
/// matrices still know their scalar context.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    zero: T,
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        let z = zero.zero_like();
        Matrix { rows, cols, data: vec![z.clone(); rows * cols], zero: z }
    }

    pub fn identity(n: usize, zero: &T) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m.data[i * n + i] = zero.one_like();
        }
        m
    }

    /// Builds a matrix from rows; `zero` is only consulted when `rows` is
    /// empty or has empty rows.
    pub fn from_rows(rows: Vec<Vec<T>>, zero: &T) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), zero: zero.zero_like() })
    }

    pub fn from_cols(cols: Vec<Vec<T>>, zero: &T) -> Result<Self> {
        Ok(Self::from_rows(cols, zero)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero(&self) -> &T {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map<S: Scalar>(&self, zero: &S, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero: zero.zero_like() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len(), &self.zero);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack {} vs {} rows", self.rows, other.rows)));
        }
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
            .collect();
        Self::from_rows(rows, &self.zero)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack {} vs {} cols", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data, zero: self.zero.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_s() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero_s() {
                        let v = out.get(i, j).add_s(&a.mul_s(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero_s() && !b.is_zero_s())
                    .fold(self.zero.clone(), |acc, (a, b)| acc.add_s(&a.mul_s(b)))
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add_s(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub_s(b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("shape".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data, zero: self.zero.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_s)
    }

    /// Fraction-free (Bareiss) determinant. The pivot is the first nonzero
    /// entry of the current column scanning downwards.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let one = self.zero.one_like();
        if n == 0 {
            return Ok(one);
        }
        let mut a = self.to_rows();
        let mut sign_flip = false;
        let mut prev = one;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero_s()) else {
                return Ok(self.zero.clone());
            };
            if p != k {
                a.swap(p, k);
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].mul_s(&a[k][k]).sub_s(&a[i][k].mul_s(&a[k][j]));
                    a[i][j] = num.div_s(&prev);
                }
                a[i][k] = self.zero.clone();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_flip { d.neg_s() } else { d })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero_s()) else { continue };
            a.swap(p, r);
            let inv = a[r][c].clone();
            for j in c..self.cols {
                a[r][j] = a[r][j].div_s(&inv);
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero_s() {
                    let f = a[i][c].clone();
                    for j in c..self.cols {
                        if !a[r][j].is_zero_s() {
                            a[i][j] = a[i][j].sub_s(&f.mul_s(&a[r][j]));
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Self::from_rows(a, &self.zero).expect("rectangular"), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.zero.clone(); self.cols];
            v[f] = self.zero.one_like();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, f).neg_s();
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let bm = Matrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect(), &self.zero)?;
        let aug = if self.rows == 0 { return Ok(Some(vec![self.zero.clone(); self.cols])) } else { self.hstack(&bm)? };
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n, &self.zero))?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.submatrix(&(0..n).collect::<Vec<_>>(), &cols))
    }
}

impl Matrix<Q> {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        Self::from_rows(rows, &Q::zero()).expect("rectangular")
    }

    /// Kernel basis as primitive integer vectors whose first nonzero entry
    /// is positive.
    pub fn kernel_rational(&self) -> Vec<Vec<BigInt>> {
        self.kernel()
            .iter()
            .map(|v| {
                let mut w = primitive_integer_vector(v);
                if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    w.iter_mut().for_each(|x| *x = -x.clone());
                }
                w
            })
            .collect()
    }

    /// Z-basis of the integer points of the kernel.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| primitive_integer_vector(self.row(i))).collect();
        integer_kernel(&a, self.cols)
    }
}

/// Integer matrix stored as a list of rows.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn col_op_sub(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let t = &row[src] * f;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_negate(m: &mut IntMatrix, a: usize) {
    for row in m.iter_mut() {
        row[a] = -row[a].clone();
    }
}

/// Column-style Hermite normal form with the unimodular transform `V`
/// (`input · V = H`). `H` is in lower column echelon form, pivots are
/// positive and entries left of a pivot lie in `[0, pivot)`. Zero columns
/// are moved to the right.
pub fn hnf_with_transform(m: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let mut h = m.clone();
    let mut v: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pc = 0;
    let mut pivot_rows = Vec::new();
    for r in 0..rows {
        if pc == cols {
            break;
        }
        // gcd-reduce row r over columns pc..cols into column pc
        loop {
            let nz: Vec<usize> = (pc..cols).filter(|&j| !h[r][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&j| h[r][j].abs()).expect("nonempty");
            if best != pc {
                col_swap(&mut h, best, pc);
                col_swap(&mut v, best, pc);
            }
            let mut done = true;
            for j in pc + 1..cols {
                if !h[r][j].is_zero() {
                    let f = h[r][j].div_floor(&h[r][pc]);
                    col_op_sub(&mut h, j, pc, &f);
                    col_op_sub(&mut v, j, pc, &f);
                    if !h[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][pc].is_zero() {
            continue;
        }
        if h[r][pc].is_negative() {
            col_negate(&mut h, pc);
            col_negate(&mut v, pc);
        }
        for j in 0..pc {
            let f = h[r][j].div_floor(&h[r][pc]);
            col_op_sub(&mut h, j, pc, &f);
            col_op_sub(&mut v, j, pc, &f);
        }
        pivot_rows.push(r);
        pc += 1;
    }
    (h, v)
}

/// Column-style Hermite normal form of the column lattice of `m`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let cols = m.first().map_or(0, Vec::len);
    hnf_with_transform(m, cols).0
}

/// Z-basis of `{x ∈ Z^cols : a·x = 0}`.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let (h, v) = hnf_with_transform(a, cols);
    let rank = (0..cols).filter(|&j| h.iter().any(|row| !row[j].is_zero())).count();
    (rank..cols).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// HNF of the lattice spanned by the given vectors (as columns).
pub fn lattice_hnf(basis: &[Vec<BigInt>]) -> IntMatrix {
    let dim = basis.first().map_or(0, Vec::len);
    let m: IntMatrix = (0..dim).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    hnf(&m)
}

/// Whether `v` lies in the lattice spanned by `basis`.
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let dim = v.len();
    let mut with: Vec<Vec<BigInt>> = basis.to_vec();
    with.push(v.to_vec());
    let a = lattice_hnf(basis);
    let b = lattice_hnf(&with);
    let strip = |m: IntMatrix| -> Vec<Vec<BigInt>> {
        let cols = m.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| (0..dim).map(|i| m[i][j].clone()).collect::<Vec<_>>())
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect()
    };
    strip(a) == strip(b)
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact Gram–Schmidt data: coefficients μ and squared norms of b*.
pub fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = basis.len();
    let mut mu = vec![vec![Q::zero(); n]; n];
    let mut bstar: Vec<Vec<Q>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Q> = basis[i].iter().map(|x| Q::from_integer(x.clone())).collect();
        for j in 0..i {
            if norms[j] == Q::zero() {
                continue;
            }
            let dot: Q = basis[i].iter().zip(&bstar[j]).map(|(a, b)| Q::from_integer(a.clone()) * b).sum();
            mu[i][j] = dot / &norms[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL reduction with δ = 3/4. Rows of `basis` are the lattice vectors.
pub fn lll(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut b = basis.to_vec();
    let (mut mu, mut bn) = gram_schmidt(&b);
    if bn.iter().any(Zero::is_zero) {
        return Err(Error::DependentInput);
    }
    let delta = Q::new(3.into(), 4.into());
    let half = Q::new(1.into(), 2.into());
    let mut k = 1;
    while k < n {
        size_reduce(&mut b, &mut mu, k, k - 1, &half);
        let lhs = &bn[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bn[k - 1];
        if *lhs >= rhs {
            for j in (0..k.saturating_sub(1)).rev() {
                size_reduce(&mut b, &mut mu, k, j, &half);
            }
            k += 1;
        } else {
            // swap b_k and b_{k-1}, update Gram–Schmidt data
            b.swap(k, k - 1);
            let m = mu[k][k - 1].clone();
            let bb = &bn[k] + &m * &m * &bn[k - 1];
            let new_mu = &m * &bn[k - 1] / &bb;
            let new_bk = &bn[k - 1] * &bn[k] / &bb;
            bn[k - 1] = bb;
            bn[k] = new_bk;
            mu[k][k - 1] = new_mu.clone();
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = &t + &new_mu * &mu[i][k];
            }
            k = k.max(2) - 1;
        }
    }
    Ok(b)
}

fn size_reduce(b: &mut [Vec<BigInt>], mu: &mut [Vec<Q>], k: usize, j: usize, half: &Q) {
    if mu[k][j].abs() <= *half {
        return;
    }
    let r = crate::rational::round_q(&mu[k][j]);
    let rq = Q::from_integer(r.clone());
    let bj = b[j].clone();
    for (x, y) in b[k].iter_mut().zip(&bj) {
        *x -= &r * y;
    }
    for i in 0..j {
        let t = &rq * &mu[j][i];
        mu[k][i] -= t;
    }
    mu[k][j] -= rq;
}

/// Checks the size condition |μ_ij| ≤ 1/2 and the Lovász condition with
/// δ = 3/4 on freshly computed Gram–Schmidt data.
pub fn is_lll_reduced(basis: &[Vec<BigInt>]) -> bool {
    let (mu, bn) = gram_schmidt(basis);
    let half = Q::new(1.into(), 2.into());
    let delta = Q::new(3.into(), 4.into());
    for i in 0..basis.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 && bn[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bn[i - 1] {
            return false;
        }
    }
    true
}

pub fn max_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

pub fn squared_norm(v: &[BigInt]) -> BigInt {
    dot_int(v, v)
}
