//! Constructors for every simple real Jordan algebra family, plus their
//! closed-form `det P_u` identities.

mod detformula;
pub(crate) mod matrix;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::composition::CdSignature;
use crate::jordan::{JordanAlgebra, JordanError};
use crate::rational::Rational;

pub use detformula::{
    det_p_closed_form, exponent_audit, published_table, verify_det_formula, DetFormulaReport, ExponentAudit, PublishedEntry,
};
use matrix::Realization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Reals,
    Quadratic,
    FullMatrixR,
    FullMatrixH,
    SymmetricR,
    HermitianC,
    HermitianH,
    SplitQuaternionHermitian,
    SkewHermitianH,
    OctonionHermitian3,
    SplitOctonionHermitian3R,
    ComplexField,
    ComplexQuadratic,
    SymmetricC,
    FullMatrixC,
    SkewC,
    SplitOctonionHermitian3C,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::Reals,
        Family::Quadratic,
        Family::FullMatrixR,
        Family::FullMatrixH,
        Family::SymmetricR,
        Family::HermitianC,
        Family::HermitianH,
        Family::SplitQuaternionHermitian,
        Family::SkewHermitianH,
        Family::OctonionHermitian3,
        Family::SplitOctonionHermitian3R,
        Family::ComplexField,
        Family::ComplexQuadratic,
        Family::SymmetricC,
        Family::FullMatrixC,
        Family::SkewC,
        Family::SplitOctonionHermitian3C,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            Family::Reals => "reals",
            Family::Quadratic => "quadratic",
            Family::FullMatrixR => "full_matrix_r",
            Family::FullMatrixH => "full_matrix_h",
            Family::SymmetricR => "symmetric_r",
            Family::HermitianC => "hermitian_c",
            Family::HermitianH => "hermitian_h",
            Family::SplitQuaternionHermitian => "split_quaternion_hermitian",
            Family::SkewHermitianH => "skew_hermitian_h",
            Family::OctonionHermitian3 => "octonion_hermitian3",
            Family::SplitOctonionHermitian3R => "split_octonion_hermitian3_r",
            Family::ComplexField => "complex_field",
            Family::ComplexQuadratic => "complex_quadratic",
            Family::SymmetricC => "symmetric_c",
            Family::FullMatrixC => "full_matrix_c",
            Family::SkewC => "skew_c",
            Family::SplitOctonionHermitian3C => "split_octonion_hermitian3_c",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::Reals => "R",
            Family::Quadratic => "Jord_m(Q): real quadratic factor (spin factor)",
            Family::FullMatrixR => "M_m(R)",
            Family::FullMatrixH => "M_m(H)",
            Family::SymmetricR => "S_m(R, Gamma)",
            Family::HermitianC => "H_m(C, Gamma)",
            Family::HermitianH => "H_m(H, Gamma)",
            Family::SplitQuaternionHermitian => "H_m(Q, R) realized as A_2m(R) with X o Y = (XJY + YJX)/2",
            Family::SkewHermitianH => "SH_m(H) with X o Y = (X q^-1 Y + Y q^-1 X)/2, q = iI",
            Family::OctonionHermitian3 => "H_3(O, Gamma), the Albert algebra",
            Family::SplitOctonionHermitian3R => "H_3(O_split, R)",
            Family::ComplexField => "C viewed as a real algebra",
            Family::ComplexQuadratic => "Jord_m(I): complex quadratic factor, viewed as real",
            Family::SymmetricC => "S_m(C), viewed as real",
            Family::FullMatrixC => "M_m(C), viewed as real",
            Family::SkewC => "H_m(Q, C) realized as A_2m(C), viewed as real",
            Family::SplitOctonionHermitian3C => "H_3(O_split, C), viewed as real",
        }
    }

    /// Whether the family is a complex algebra viewed as a real one.
    pub fn is_complex(self) -> bool {
        matches!(
            self,
            Family::ComplexField
                | Family::ComplexQuadratic
                | Family::SymmetricC
                | Family::FullMatrixC
                | Family::SkewC
                | Family::SplitOctonionHermitian3C
        )
    }

    pub fn uses_m(self) -> bool {
        !matches!(
            self,
            Family::Reals
                | Family::ComplexField
                | Family::OctonionHermitian3
                | Family::SplitOctonionHermitian3R
                | Family::SplitOctonionHermitian3C
        )
    }

    pub fn accepts_gamma(self) -> bool {
        matches!(self, Family::SymmetricR | Family::HermitianC | Family::HermitianH | Family::OctonionHermitian3)
    }

    /// Smallest `m` allowed by the classification.
    pub fn strict_min_m(self) -> usize {
        match self {
            Family::FullMatrixH | Family::SkewHermitianH => 2,
            f if f.uses_m() => 3,
            _ => 3,
        }
    }

    /// The real family whose complexification this is.
    pub fn real_form(self) -> Option<Family> {
        match self {
            Family::ComplexField => Some(Family::Reals),
            Family::ComplexQuadratic => Some(Family::Quadratic),
            Family::SymmetricC => Some(Family::SymmetricR),
            Family::FullMatrixC => Some(Family::FullMatrixR),
            Family::SkewC => Some(Family::SplitQuaternionHermitian),
            Family::SplitOctonionHermitian3C => Some(Family::SplitOctonionHermitian3R),
            _ => None,
        }
    }

    /// Dimension of the built algebra.
    pub fn dim(self, m: usize) -> usize {
        match self {
            Family::Reals => 1,
            Family::Quadratic => m,
            Family::FullMatrixR => m * m,
            Family::FullMatrixH => 4 * m * m,
            Family::SymmetricR => m * (m + 1) / 2,
            Family::HermitianC => m * m,
            Family::HermitianH => m * (2 * m - 1),
            Family::SplitQuaternionHermitian => m * (2 * m - 1),
            Family::SkewHermitianH => m * (2 * m + 1),
            Family::OctonionHermitian3 | Family::SplitOctonionHermitian3R => 27,
            f => 2 * f.real_form().expect("complex family").dim(m),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.cli_name() == s.trim())
            .ok_or_else(|| format!("unknown family {s:?}; run `catalog list` for the available names"))
    }
}

/// Family plus parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// `±1` diagonal of the twisting element for the twisted families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<i8>>,
    /// Signature of the quadratic factor's product form: either `m` signs
    /// for `diag(1, B)` (first sign `+`) or `m − 1` signs for `B`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<i8>>,
    /// Enforce the classification's size thresholds.
    #[serde(default = "default_strict")]
    pub strict: bool,
}

fn default_strict() -> bool {
    true
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, m: None, gamma: None, q: None, strict: true }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_gamma(mut self, gamma: Vec<i8>) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_q(mut self, q: Vec<i8>) -> Self {
        self.q = Some(q);
        self
    }

    /// Permits sizes below the classification thresholds.
    pub fn desk(mut self) -> Self {
        self.strict = false;
        self
    }

    /// Size parameter, defaulting to 3 for the fixed-size octonionic families.
    pub fn size(&self) -> usize {
        if self.family.uses_m() {
            self.m.unwrap_or(self.family.strict_min_m())
        } else if matches!(self.family, Family::Reals | Family::ComplexField) {
            1
        } else {
            3
        }
    }

    /// Whether the instance is one of the algebras of the classification.
    pub fn is_canonical(&self) -> bool {
        !self.family.uses_m() || self.size() >= self.family.strict_min_m()
    }

    pub fn dim(&self) -> usize {
        self.family.dim(self.size())
    }

    pub fn validate(&self) -> Result<(), JordanError> {
        let f = self.family;
        let m = self.size();
        let bad = |msg: String| Err(JordanError::Invalid(format!("{}: {msg}", f.cli_name())));
        if !f.uses_m() {
            if let Some(given) = self.m {
                if given != self.size() {
                    return bad(format!("size is fixed at {}, got m = {given}", self.size()));
                }
            }
        } else if m == 0 {
            return bad("m must be positive".into());
        }
        if self.strict && !self.is_canonical() {
            return bad(format!("m = {m} is below the classification threshold m >= {} (use desk mode)", f.strict_min_m()));
        }
        if let Some(g) = &self.gamma {
            if !f.accepts_gamma() {
                return bad("this family takes no gamma".into());
            }
            if g.len() != m || g.iter().any(|x| *x != 1 && *x != -1) {
                return bad(format!("gamma must be {m} entries of +1/-1"));
            }
        }
        if let Some(q) = &self.q {
            if !matches!(f, Family::Quadratic) {
                return bad("only the real quadratic factor takes q".into());
            }
            if q.iter().any(|x| *x != 1 && *x != -1) {
                return bad("q entries must be +1/-1".into());
            }
            if q.len() == m {
                if q[0] != 1 {
                    return bad("the first sign of the product form belongs to the unity and must be +".into());
                }
            } else if q.len() + 1 != m {
                return bad(format!("q must have {m} (product form) or {} (form on e-perp) entries", m - 1));
            }
        }
        Ok(())
    }

    /// Gamma as integers, identity when absent.
    pub fn gamma_or_identity(&self) -> Vec<i64> {
        match &self.gamma {
            Some(g) => g.iter().map(|&x| x as i64).collect(),
            None => vec![1; self.size()],
        }
    }

    /// Diagonal of the form `B` on `e^⊥` for the quadratic families.
    pub fn b_diagonal(&self) -> Vec<i64> {
        let m = self.size();
        match &self.q {
            Some(q) if q.len() == m => q[1..].iter().map(|&x| x as i64).collect(),
            Some(q) => q.iter().map(|&x| x as i64).collect(),
            None => vec![1; m.saturating_sub(1)],
        }
    }

    pub fn name(&self) -> String {
        let mut s = self.family.cli_name().to_string();
        if self.family.uses_m() {
            s.push_str(&format!("(m={})", self.size()));
        }
        if let Some(g) = &self.gamma {
            let signs: Vec<&str> = g.iter().map(|x| if *x > 0 { "+" } else { "-" }).collect();
            s.push_str(&format!("[gamma={}]", signs.join(",")));
        }
        if let Some(q) = &self.q {
            let signs: Vec<&str> = q.iter().map(|x| if *x > 0 { "+" } else { "-" }).collect();
            s.push_str(&format!("[q={}]", signs.join(",")));
        }
        if !self.is_canonical() {
            s.push_str(" (non-canonical)");
        }
        s
    }

    /// Matrix realization of the real families that have one.
    pub(crate) fn realization(&self) -> Option<Realization> {
        let m = self.size();
        let gamma = self.gamma_or_identity();
        Some(match self.family {
            Family::FullMatrixR => matrix::full(m, CdSignature::reals()),
            Family::FullMatrixH => matrix::full(m, CdSignature::quaternion()),
            Family::SymmetricR => matrix::hermitian(m, CdSignature::reals(), &gamma),
            Family::HermitianC => matrix::hermitian(m, CdSignature::complex(), &gamma),
            Family::HermitianH => matrix::hermitian(m, CdSignature::quaternion(), &gamma),
            Family::SplitQuaternionHermitian => matrix::skew_symmetric_j(m),
            Family::SkewHermitianH => matrix::skew_hermitian_quaternion(m),
            Family::OctonionHermitian3 => matrix::hermitian(3, CdSignature::octonion(), &gamma),
            Family::SplitOctonionHermitian3R => matrix::hermitian(3, CdSignature::split_octonion(), &[1, 1, 1]),
            _ => return None,
        })
    }

    fn real_form_spec(&self) -> Option<FamilySpec> {
        let real = self.family.real_form()?;
        Some(FamilySpec {
            family: real,
            m: if real.uses_m() { Some(self.size()) } else { None },
            gamma: None,
            q: None,
            strict: false,
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Builds the algebra of a family with exact rational structure constants.
pub fn build(spec: &FamilySpec) -> Result<JordanAlgebra<Rational>, JordanError> {
    spec.validate()?;
    let name = spec.name();
    let alg = match spec.family {
        Family::Reals => JordanAlgebra::from_fn(&name, vec!["1".into()], |_, _| vec![Rational::integer(1)])?,
        Family::Quadratic => spin_factor(&name, &spec.b_diagonal())?,
        f if f.is_complex() => {
            let real = build(&spec.real_form_spec().expect("complex family"))?;
            complexify(&real, &name)?
        }
        _ => spec.realization().expect("matrix family").algebra(&name)?,
    };
    if alg.unity().is_none() {
        return Err(JordanError::NotUnital(name));
    }
    Ok(alg.with_family(Some(spec.clone())))
}

/// `ℝe ⊕ W` with `(αe + w)∘(βe + v) = (αβ + B(w, v)) e + αv + βw`.
pub fn spin_factor(name: &str, b_diag: &[i64]) -> Result<JordanAlgebra<Rational>, JordanError> {
    let n = b_diag.len() + 1;
    let mut labels = vec!["e".to_string()];
    labels.extend((1..n).map(|k| format!("w{k}")));
    JordanAlgebra::from_fn(name, labels, |i, j| {
        let mut v = vec![Rational::zero(); n];
        match (i, j) {
            (0, j) => v[j] = Rational::integer(1),
            (i, 0) => v[i] = Rational::integer(1),
            (i, j) if i == j => v[0] = Rational::integer(b_diag[i - 1]),
            _ => {}
        }
        v
    })
}

/// The complex algebra `V ⊗ ℂ` as a real algebra on `V ⊕ iV`.
pub fn complexify(real: &JordanAlgebra<Rational>, name: &str) -> Result<JordanAlgebra<Rational>, JordanError> {
    let n = real.dim();
    let mut labels: Vec<String> = real.labels().to_vec();
    labels.extend(real.labels().iter().map(|l| format!("i*{l}")));
    JordanAlgebra::from_fn(name, labels, |a, b| {
        let (i, ia) = (a % n, a >= n);
        let (j, ib) = (b % n, b >= n);
        let mut v = vec![Rational::zero(); 2 * n];
        let sign = if ia && ib { Rational::integer(-1) } else { Rational::integer(1) };
        let offset = if ia ^ ib { n } else { 0 };
        for (k, c) in real.basis_product(i, j) {
            v[offset + k] = c.clone() * &sign;
        }
        v
    })
}

/// One entry per family at the given size.
pub fn list() -> Vec<(Family, &'static str)> {
    Family::ALL.iter().map(|f| (*f, f.description())).collect()
}

/// The desk-scale instances used for exhaustive verification: every family at
/// `m ∈ {2, 3}` where it has a size parameter, plus twisted variants.
pub fn desk_instances() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for f in Family::ALL {
        if f.uses_m() {
            for m in [2, 3] {
                out.push(FamilySpec::new(f).with_m(m).desk());
            }
        } else {
            out.push(FamilySpec::new(f).desk());
        }
    }
    out.push(FamilySpec::new(Family::SymmetricR).with_m(3).with_gamma(vec![1, 1, -1]));
    out.push(FamilySpec::new(Family::HermitianC).with_m(3).with_gamma(vec![1, -1, 1]));
    out.push(FamilySpec::new(Family::HermitianH).with_m(3).with_gamma(vec![-1, 1, 1]));
    out.push(FamilySpec::new(Family::OctonionHermitian3).with_gamma(vec![1, 1, -1]));
    out.push(FamilySpec::new(Family::Quadratic).with_m(3).with_q(vec![1, -1, 1]));
    out
}
