//! Dense exact linear algebra over the rationals, plus small integer matrices
//! for lattice actions.  Sizes here are desk scale (a few hundred at most), so
//! everything is straightforward Gaussian elimination with exact pivots.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coefficients::int;

/// Row-major dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigRational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        QMat { rows, cols, data: entries.iter().map(|&e| int(e)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cell = &mut out[(i, j)];
                    *cell = &*cell + prod;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let mut t = BigRational::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !m[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
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

    /// Exact inverse; None when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hcat(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Columns spanning the kernel {x : self * x = 0}.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -r[(ri, fc)].clone();
            }
        }
        out
    }

    /// Columns spanning the column space (the pivot columns of self).
    pub fn image_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        let mut out = Self::zeros(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, k)] = self[(i, c)].clone();
            }
        }
        out
    }

    /// Solve self * X = rhs where self has full column rank; None if
    /// inconsistent or rank-deficient.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.len() != self.cols || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        // Consistency: no pivot rows beyond rank with nonzero rhs.
        for i in pivots.len()..self.rows {
            for j in self.cols..aug.cols {
                if !r[(i, j)].is_zero() {
                    return None;
                }
            }
        }
        Some(Self::from_fn(self.cols, rhs.cols, |i, j| r[(i, self.cols + j)].clone()))
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if !m[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { return BigRational::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Kronecker product self (x) other.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Square integer matrix acting on the character lattice X (row-major).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMat {
    pub n: usize,
    pub data: Vec<i64>,
}

impl IMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IMat { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IMat { n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.n;
        assert_eq!(v.len(), n);
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn apply_rat(&self, v: &[BigRational]) -> Vec<BigRational> {
        let n = self.n;
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..n {
                    if self.get(i, j) != 0 {
                        acc += &v[j] * int(self.get(i, j));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_fn(self.n, self.n, |i, j| int(self.get(i, j)))
    }
}

/// Exact integer inverse of a matrix in GL_n(Z); panics if the inverse is not
/// integral (callers only pass lattice automorphisms).
pub fn imat_inverse(m: &IMat) -> IMat {
    use num_traits::ToPrimitive;
    let q = m.to_qmat().inverse().expect("lattice automorphism must be invertible");
    let n = m.n;
    let mut data = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            let e = &q[(i, j)];
            assert!(e.is_integer(), "inverse of a lattice automorphism must be integral");
            data[i * n + j] = e.to_integer().to_i64().expect("entry fits in i64");
        }
    }
    IMat { n, data }
}

/// Column-style Hermite normal form of a full-rank integer lattice basis.
///
/// `cols` are the basis vectors (each of length n, with n = cols.len()).
/// Returns a new basis for the same lattice, lower triangular with positive
/// diagonal and off-pivot entries reduced into `[0, pivot)`.
pub fn hnf_columns(cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cols.len();
    assert!(cols.iter().all(|c| c.len() == n));
    let mut m: Vec<Vec<i64>> = cols.to_vec();
    for i in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for j in i..n {
                if m[j][i] != 0 && best.is_none_or(|b| m[j][i].abs() < m[b][i].abs()) {
                    best = Some(j);
                }
            }
            let b = best.expect("basis must have full rank");
            m.swap(i, b);
            let mut done = true;
            for j in (i + 1)..n {
                if m[j][i] != 0 {
                    let q = m[j][i].div_euclid(m[i][i]);
                    for r in 0..n {
                        m[j][r] -= q * m[i][r];
                    }
                    if m[j][i] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[i][i] < 0 {
            for r in 0..n {
                m[i][r] = -m[i][r];
            }
        }
        for j in 0..i {
            let q = m[j][i].div_euclid(m[i][i]);
            if q != 0 {
                for r in 0..n {
                    m[j][r] -= q * m[i][r];
                }
            }
        }
    }
    m
}

/// Canonical representative of `v` modulo the lattice spanned by the HNF
/// basis `h` (as produced by [`hnf_columns`]): coordinates land in
/// `[0, h[i][i])` at each pivot.
pub fn reduce_mod_hnf(h: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let n = h.len();
    let mut out = v.to_vec();
    for i in 0..n {
        let q = out[i].div_euclid(h[i][i]);
        if q != 0 {
            for r in 0..n {
                out[r] -= q * h[i][r];
            }
        }
    }
    out
}

/// All canonical representatives of Z^n modulo the HNF lattice `h`
/// (the mixed-radix digit vectors); their count is the lattice index.
pub fn hnf_quotient_reps(h: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = h.len();
    let mut reps = vec![vec![0i64; n]];
    for i in 0..n {
        let d = h[i][i];
        let mut next = Vec::new();
        for r in reps {
            for digit in 0..d {
                let mut v = r.clone();
                v[i] = digit;
                next.push(v);
            }
        }
        reps = next;
    }
    reps
}
