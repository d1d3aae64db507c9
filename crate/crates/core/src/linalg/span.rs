use crate::scalar::{Mode, Scalar, TOL};

/// Incrementally built subspace of `S^len`, kept in fully reduced echelon
/// form with sparse rows.
///
/// Optionally tracks how each echelon row is assembled from the vectors that
/// were accepted so far, which turns every rejected insertion into an
/// explicit linear dependency.
#[derive(Clone, Debug)]
pub struct SpanBasis<S> {
    len: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<(usize, S)>>,
    combos: Option<Vec<Vec<S>>>,
}

/// Outcome of [`SpanBasis::insert`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insert<S> {
    /// The vector was independent and is now accepted vector number `index`.
    Added { index: usize },
    /// The vector lies in the span; coefficients over the accepted vectors
    /// (empty unless tracking is enabled).
    Dependent { coeffs: Vec<S> },
}

impl<S: Scalar> SpanBasis<S> {
    pub fn new(len: usize) -> Self {
        SpanBasis { len, pivots: Vec::new(), rows: Vec::new(), combos: None }
    }

    pub fn with_tracking(len: usize) -> Self {
        SpanBasis { combos: Some(Vec::new()), ..Self::new(len) }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Residual of `v` after removing its component in the span, together
    /// with the coefficients on the echelon rows.
    fn reduce(&self, v: &[S]) -> (Vec<S>, Vec<S>) {
        assert_eq!(v.len(), self.len, "vector length does not match the ambient space");
        let mut r = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero_exact() {
                for (j, x) in row {
                    let d = c.clone() * x;
                    r[*j] -= &d;
                }
                r[p] = S::zero();
            }
            coeffs.push(c);
        }
        (r, coeffs)
    }

    fn residual_pivot(v: &[S], r: &[S]) -> Option<usize> {
        match S::MODE {
            Mode::Rational => r.iter().position(|x| !x.is_zero_exact()),
            Mode::Float => {
                let scale = v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
                let (best, mag) = r
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (i, x.magnitude()))
                    .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                (mag > TOL.rank * scale && mag > TOL.abs).then_some(best)
            }
        }
    }

    /// Largest entry of the component of `v` outside the span.
    pub fn residual(&self, v: &[S]) -> f64 {
        let (r, _) = self.reduce(v);
        r.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let (r, _) = self.reduce(v);
        Self::residual_pivot(v, &r).is_none()
    }

    /// Coordinates of `v` over the accepted vectors, if it lies in the span.
    /// Requires tracking.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        let (r, coeffs) = self.reduce(v);
        if Self::residual_pivot(v, &r).is_some() {
            return None;
        }
        Some(self.combine(&coeffs))
    }

    fn combine(&self, row_coeffs: &[S]) -> Vec<S> {
        let Some(combos) = &self.combos else { return Vec::new() };
        let mut out = vec![S::zero(); self.rows.len()];
        for (c, combo) in row_coeffs.iter().zip(combos) {
            if c.is_zero_exact() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(combo) {
                if !x.is_zero_exact() {
                    o.mul_add_assign(c, x);
                }
            }
        }
        out
    }

    pub fn insert(&mut self, v: &[S]) -> Insert<S> {
        let (mut r, coeffs) = self.reduce(v);
        let Some(p) = Self::residual_pivot(v, &r) else {
            return Insert::Dependent { coeffs: self.combine(&coeffs) };
        };
        let index = self.rows.len();
        let inv = S::one() / &r[p];
        if S::MODE == Mode::Float {
            let scale = r.iter().map(Scalar::magnitude).fold(0.0, f64::max);
            for x in r.iter_mut() {
                if x.magnitude() <= TOL.rank * scale * 1e-3 {
                    *x = S::zero();
                }
            }
        }
        let row: Vec<(usize, S)> = r
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero_exact())
            .map(|(j, x)| (j, if j == p { S::one() } else { x * &inv }))
            .collect();

        // new row = (v - sum coeffs_i row_i) * inv, expressed over accepted vectors.
        let mut new_combo = None;
        if self.combos.is_some() {
            let mut combo: Vec<S> = self.combine(&coeffs).into_iter().map(|x| -(x * &inv)).collect();
            combo.push(inv.clone());
            new_combo = Some(combo);
        }
        if let Some(combos) = self.combos.as_mut() {
            for c in combos.iter_mut() {
                c.push(S::zero());
            }
        }

        // Clear the new pivot from existing rows.
        for k in 0..self.rows.len() {
            let a = match self.rows[k].binary_search_by_key(&p, |(j, _)| *j) {
                Ok(pos) => self.rows[k][pos].1.clone(),
                Err(_) => continue,
            };
            self.rows[k] = axpy_sparse(&self.rows[k], &(-a.clone()), &row);
            if let (Some(combos), Some(nc)) = (self.combos.as_mut(), new_combo.as_ref()) {
                for (x, y) in combos[k].iter_mut().zip(nc) {
                    if !y.is_zero_exact() {
                        let d = a.clone() * y;
                        *x -= &d;
                    }
                }
            }
        }
        self.pivots.push(p);
        self.rows.push(row);
        if let (Some(combos), Some(nc)) = (self.combos.as_mut(), new_combo) {
            combos.push(nc);
        }
        Insert::Added { index }
    }
}

/// `a + s * b` for sorted sparse vectors, dropping exact zeros.
fn axpy_sparse<S: Scalar>(a: &[(usize, S)], s: &S, b: &[(usize, S)]) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, s.clone() * &b[j].1));
            j += 1;
        } else {
            let mut x = a[i].1.clone();
            x.mul_add_assign(s, &b[j].1);
            if !x.is_negligible(a[i].1.magnitude()) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Basis of the kernel of the linear map whose images of the standard basis
/// vectors are `images`, for maps with a much larger codomain than domain.
pub fn kernel_of_images<S: Scalar>(images: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = images.len();
    let Some(len) = images.first().map(Vec::len) else { return Vec::new() };
    let mut span = SpanBasis::with_tracking(len);
    let mut accepted = Vec::new();
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        match span.insert(img) {
            Insert::Added { .. } => accepted.push(i),
            Insert::Dependent { coeffs } => {
                let mut k = vec![S::zero(); n];
                k[i] = S::one();
                for (c, &a) in coeffs.iter().zip(&accepted) {
                    k[a] = -c.clone();
                }
                kernel.push(k);
            }
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::integer(x)).collect()
    }

    #[test]
    fn tracking_recovers_dependencies() {
        let mut s = SpanBasis::with_tracking(4);
        assert_eq!(s.insert(&qv(&[1, 2, 0, 1])), Insert::Added { index: 0 });
        assert_eq!(s.insert(&qv(&[0, 1, 1, 0])), Insert::Added { index: 1 });
        match s.insert(&qv(&[2, 1, -3, 2])) {
            Insert::Dependent { coeffs } => assert_eq!(coeffs, qv(&[2, -3])),
            other => panic!("expected dependency, got {other:?}"),
        }
        assert_eq!(s.coordinates(&qv(&[1, 3, 1, 1])), Some(qv(&[1, 1])));
        assert!(s.coordinates(&qv(&[0, 0, 0, 1])).is_none());
    }

    proptest! {
        #[test]
        fn dimension_matches_dense_rank(entries in proptest::collection::vec(-2i64..=2, 24)) {
            let rows: Vec<Vec<Rational>> = entries.chunks(6).map(qv).collect();
            let mut s = SpanBasis::with_tracking(6);
            for r in &rows {
                s.insert(r);
            }
            prop_assert_eq!(s.dim(), Mat::from_rows(rows.clone()).rank());
            for r in &rows {
                let c = s.coordinates(r).unwrap();
                prop_assert_eq!(c.len(), s.dim());
            }
            let images: Vec<Vec<Rational>> = rows.clone();
            let ker = kernel_of_images(&images);
            let m = Mat::from_cols(&images);
            prop_assert_eq!(ker.len(), 4 - m.rank());
            for k in &ker {
                prop_assert!(m.mul_vec(k).iter().all(|x| x.is_zero_exact()));
            }
        }
    }
}
