use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::{Scalar, TOL};

/// Dense row-major matrix over either backend.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[S]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_exact)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        let mut t = S::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: &S, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero_exact() {
                a.mul_add_assign(s, b);
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero_exact() {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero_exact() {
                        o.mul_add_assign(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero_exact() && !b.is_zero_exact() {
                        acc.mul_add_assign(a, b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Scalar::to_f64)
    }

    /// Row-reduced echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.max_abs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pivot_row(r, c, scale) else { continue };
            m.swap_rows(r, p);
            let inv = S::one() / &m[(r, c)];
            for j in c..m.cols {
                let v = m[(r, j)].clone() * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero_exact() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero_exact() {
                        continue;
                    }
                    let d = f.clone() * &m[(r, j)];
                    m[(i, j)] -= &d;
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        if S::MODE == crate::scalar::Mode::Float {
            for x in m.data.iter_mut() {
                if x.is_negligible(1.0) {
                    *x = S::zero();
                }
            }
        }
        (m, pivots)
    }

    fn pivot_row(&self, start: usize, c: usize, scale: f64) -> Option<usize> {
        if S::MODE == crate::scalar::Mode::Rational {
            return (start..self.rows).find(|&i| !self[(i, c)].is_zero_exact());
        }
        let (best, mag) = (start..self.rows)
            .map(|i| (i, self[(i, c)].magnitude()))
            .fold((start, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > TOL.rank * scale.max(f64::MIN_POSITIVE)).then_some(best)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank; float mode uses singular values via [`Scalar::float_rank`].
    pub fn rank(&self) -> usize {
        if let Some(r) = S::float_rank(self) {
            return r;
        }
        self.rref().1.len()
    }

    /// Basis of `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len());
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// The solution of `self x = b` when `self` has full column rank.
    pub fn solve_unique(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len());
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() != self.cols || pivots.last() == Some(&self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for c in 0..n {
            let p = if S::MODE == crate::scalar::Mode::Rational {
                (c..n).find(|&i| !m[(i, c)].is_zero_exact())
            } else {
                (c..n)
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
                    .filter(|&i| !m[(i, c)].is_zero_exact())
            };
            let Some(p) = p else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = S::one() / &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero_exact() {
                    continue;
                }
                let f = m[(i, c)].clone() * &inv;
                for j in c + 1..n {
                    if m[(c, j)].is_zero_exact() {
                        continue;
                    }
                    let d = f.clone() * &m[(c, j)];
                    m[(i, j)] -= &d;
                }
            }
        }
        det
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, by
    /// congruence diagonalization.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_square());
        if let Some(res) = S::float_inertia(self) {
            return res;
        }
        let n = self.rows;
        let scale = self.max_abs();
        let mut m = self.clone();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut k = 0;
        while k < n {
            if m[(k, k)].is_negligible(scale) {
                if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_negligible(scale)) {
                    m.swap_sym(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_negligible(scale)) {
                    // Row/column k += row/column j makes the pivot 2 m_kj + m_jj = 2 m_kj.
                    m.add_sym(k, j);
                } else {
                    zero += 1;
                    k += 1;
                    continue;
                }
            }
            let piv = m[(k, k)].clone();
            if piv.to_f64() > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
            let inv = S::one() / &piv;
            for i in k + 1..n {
                if m[(i, k)].is_zero_exact() {
                    continue;
                }
                let f = m[(i, k)].clone() * &inv;
                for j in k + 1..n {
                    let d = f.clone() * &m[(k, j)];
                    m[(i, j)] -= &d;
                }
                m[(i, k)] = S::zero();
                m[(k, i)] = S::zero();
            }
            k += 1;
        }
        (pos, neg, zero)
    }

    fn swap_sym(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_sym(&mut self, k: usize, j: usize) {
        for c in 0..self.cols {
            let v = self[(j, c)].clone();
            self[(k, c)] += &v;
        }
        for r in 0..self.rows {
            let v = self[(r, j)].clone();
            self[(r, k)] += &v;
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - &self[(j, i)]).is_negligible(self.max_abs())))
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), Rational::integer(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(3));
        let s = q(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.det(), Rational::integer(0));
    }

    #[test]
    fn nullspace_and_solve() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero_exact()));
        }
        assert_eq!(a.rank(), 1);
        assert!(a.solve(&[Rational::integer(1), Rational::integer(3)]).is_none());
        let x = a.solve(&[Rational::integer(1), Rational::integer(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Rational::integer(1), Rational::integer(2)]);
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let h = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(h.inertia(), (1, 1, 0));
        let d = q(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, 0]]);
        assert_eq!(d.inertia(), (1, 1, 1));
        assert_eq!(h.to_f64().inertia(), (1, 1, 0));
    }

    #[test]
    fn float_rank_uses_singular_values() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(Mat::<f64>::identity(4).rank(), 4);
    }
}
