//! The two arithmetic backends: exact rationals and `f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::Mat;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rational" | "exact" => Ok(Mode::Rational),
            "float" | "f64" => Ok(Mode::Float),
            other => Err(format!("unknown arithmetic mode {other:?} (expected rational|float)")),
        }
    }
}

/// Every numeric threshold used by the library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for float comparisons.
    pub rel: f64,
    /// Absolute floor added to the relative tolerance.
    pub abs: f64,
    /// Determinant level-set residual bound for sampled points.
    pub level: f64,
    /// Allowed violation of the `sum (n_a + 1) t_a = 0` constraint.
    pub t0: f64,
    /// Relative singularity threshold for `det P_v` before inversion.
    pub singular: f64,
    /// Relative rank threshold for float elimination and SVD.
    pub rank: f64,
}

pub const TOL: Tolerances = Tolerances {
    rel: 1e-9,
    abs: 1e-12,
    level: 1e-8,
    t0: 1e-12,
    singular: 1e-12,
    rank: 1e-9,
};

impl Tolerances {
    /// `|a - b| <= rel * max(|a|, |b|) + abs`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.rel * a.abs().max(b.abs()) + self.abs
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    const MODE: Mode;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::integer(v))
    }

    fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(num, den))
    }

    /// Zero test; `scale` is the magnitude of the quantities that produced
    /// the value and only matters in float mode.
    fn is_negligible(&self, scale: f64) -> bool;

    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self);

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_zero_exact(&self) -> bool;

    /// Value recovered from a float approximation: a small-denominator
    /// rational in exact mode, the float itself otherwise.
    fn approx_from_f64(x: f64) -> Option<Self>;

    /// Float mode overrides these with singular-value / eigenvalue based
    /// versions; exact mode falls back to elimination.
    fn float_rank(_m: &Mat<Self>) -> Option<usize> {
        None
    }

    fn float_inertia(_m: &Mat<Self>) -> Option<(usize, usize, usize)> {
        None
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn from_i64(v: i64) -> Self {
        Rational::integer(v)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.add_product(a, b);
    }

    fn is_zero_exact(&self) -> bool {
        self.is_zero()
    }

    fn approx_from_f64(x: f64) -> Option<Self> {
        Rational::approximate(x, 1_000_000)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= TOL.rel * scale.abs() + TOL.abs
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn is_zero_exact(&self) -> bool {
        *self == 0.0
    }

    fn approx_from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn float_rank(m: &Mat<f64>) -> Option<usize> {
        if m.rows() == 0 || m.cols() == 0 {
            return Some(0);
        }
        let nm = nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.data());
        let sv = nm.singular_values();
        let largest = sv.iter().cloned().fold(0.0, f64::max);
        Some(sv.iter().filter(|&&s| s > TOL.rank * largest && s > TOL.abs).count())
    }

    fn float_inertia(m: &Mat<f64>) -> Option<(usize, usize, usize)> {
        let nm = nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.data());
        let ev = nm.symmetric_eigenvalues();
        let largest = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let thr = TOL.rank * largest + TOL.abs;
        let pos = ev.iter().filter(|&&x| x > thr).count();
        let neg = ev.iter().filter(|&&x| x < -thr).count();
        Some((pos, neg, m.rows() - pos - neg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_parsing() {
        assert_eq!("Rational".parse::<Mode>().unwrap(), Mode::Rational);
        assert_eq!("float".parse::<Mode>().unwrap(), Mode::Float);
        assert!("complex".parse::<Mode>().is_err());
        assert_eq!(serde_json::to_string(&Mode::Float).unwrap(), "\"float\"");
    }

    #[test]
    fn float_negligible_uses_relative_scale() {
        assert!(1e-4_f64.is_negligible(1e6));
        assert!(!1e-4_f64.is_negligible(1.0));
        assert!(5e-13_f64.is_negligible(0.0));
        assert!(!Rational::new(1, 1 << 60).is_negligible(1e30));
    }
}
