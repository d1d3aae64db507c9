//! File formats: algebras, models, Calabi specs, `g`/`A` inputs and point
//! clouds. Rationals travel as `"p/q"` strings.

use std::io::Write;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::calabi::{CalabiFactor, CalabiSpec};
use crate::catalog::{build, Family, FamilySpec};
use crate::hypersurface::{build_model, HypersurfaceModel, ModelError};
use crate::jordan::{JordanAlgebra, JordanError};
use crate::linalg::Mat;
use crate::rational::Rational;
use crate::scalar::Mode;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    /// Malformed JSON or a value of the wrong shape at `field`.
    #[error("{source_name}: field `{field}`: {message}")]
    Schema { source_name: String, field: String, message: String },
    #[error("{source_name}: {error}")]
    Algebra { source_name: String, error: JordanError },
    #[error("{source_name}: {error}")]
    Model { source_name: String, error: ModelError },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl IoError {
    fn schema(source_name: &str, field: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Schema { source_name: source_name.to_string(), field: field.into(), message: message.into() }
    }
}

/// Parses `text` as `T`, reporting the JSON path of the first bad field.
pub fn parse_json<T: DeserializeOwned>(source_name: &str, text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let field = if field == "." { "<root>".to_string() } else { field };
        IoError::schema(source_name, field, e.inner().to_string())
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

/// `{"name", "dim", "mode", "unity", "c", "family"?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub mode: Mode,
    pub unity: Option<Vec<String>>,
    pub c: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

/// A deserialized algebra with the mode it was stored in.
#[derive(Debug, Clone)]
pub struct LoadedAlgebra {
    pub algebra: JordanAlgebra<Rational>,
    pub mode: Mode,
}

fn algebra_file(alg: &JordanAlgebra<Rational>, mode: Mode) -> AlgebraFile {
    let fmt = |x: &Rational| match mode {
        Mode::Rational => x.to_string(),
        Mode::Float => format!("{:?}", x.to_f64()),
    };
    AlgebraFile {
        name: alg.name().to_string(),
        dim: alg.dim(),
        mode,
        unity: alg.unity().map(|u| u.iter().map(fmt).collect()),
        c: alg.tensor().iter().map(|row| row.iter().map(|v| v.iter().map(fmt).collect()).collect()).collect(),
        family: alg.family().cloned(),
    }
}

/// JSON for `alg`. In float mode the coefficients are written as shortest
/// round-trip decimals.
pub fn serialize_algebra(alg: &JordanAlgebra<Rational>, mode: Mode) -> String {
    to_json(&algebra_file(alg, mode))
}

fn parse_rational(source_name: &str, field: String, s: &str) -> Result<Rational, IoError> {
    s.parse().map_err(|e| IoError::schema(source_name, field, format!("{e}")))
}

/// Parses and re-validates an algebra: shapes, symmetry of the tensor, and
/// the stated unity.
pub fn deserialize_algebra(source_name: &str, text: &str) -> Result<LoadedAlgebra, IoError> {
    let file: AlgebraFile = parse_json(source_name, text)?;
    let n = file.dim;
    if file.c.len() != n {
        return Err(IoError::schema(source_name, "c", format!("expected {n} rows, found {}", file.c.len())));
    }
    let mut c = Vec::with_capacity(n);
    for (i, row) in file.c.iter().enumerate() {
        if row.len() != n {
            return Err(IoError::schema(source_name, format!("c[{i}]"), format!("expected {n} entries, found {}", row.len())));
        }
        let mut r = Vec::with_capacity(n);
        for (j, v) in row.iter().enumerate() {
            if v.len() != n {
                return Err(IoError::schema(
                    source_name,
                    format!("c[{i}][{j}]"),
                    format!("expected {n} coefficients, found {}", v.len()),
                ));
            }
            let coeffs = v
                .iter()
                .enumerate()
                .map(|(k, s)| parse_rational(source_name, format!("c[{i}][{j}][{k}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            r.push(coeffs);
        }
        c.push(r);
    }
    let algebra_err = |error| IoError::Algebra { source_name: source_name.to_string(), error };
    let labels = match &file.family {
        Some(spec) if spec.dim() == n => build(spec).map(|a| a.labels().to_vec()).unwrap_or_else(|_| default_labels(n)),
        _ => default_labels(n),
    };
    let mut algebra = JordanAlgebra::from_tensor(file.name, labels, &c).map_err(algebra_err)?;
    if let Some(u) = &file.unity {
        if u.len() != n {
            return Err(IoError::schema(source_name, "unity", format!("expected {n} entries, found {}", u.len())));
        }
        let stated = u
            .iter()
            .enumerate()
            .map(|(k, s)| parse_rational(source_name, format!("unity[{k}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        if algebra.unity() != Some(&stated) {
            return Err(IoError::schema(source_name, "unity", "stated unity is not a unity of the product"));
        }
    }
    algebra = algebra.with_family(file.family);
    Ok(LoadedAlgebra { algebra, mode: file.mode })
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("b{i}")).collect()
}

/// Model file: the algebra plus `L1`, `C` and the origin invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub algebra: AlgebraFile,
    #[serde(rename = "L1")]
    pub l1: String,
    #[serde(rename = "C")]
    pub c: f64,
    pub n: usize,
    pub v0_basis: Vec<Vec<String>>,
    pub g: Vec<Vec<String>>,
    /// `A[i][j][k]`: coordinates of `A_o(X_i, X_j)` over `X_k`.
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<String>>>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}

pub fn serialize_model(model: &HypersurfaceModel<Rational>) -> String {
    let g = (0..model.n()).map(|i| strings(model.g_o.row(i))).collect();
    let a = model.a_tensor().iter().map(|m| m.iter().map(|v| strings(v)).collect()).collect();
    to_json(&ModelFile {
        algebra: algebra_file(&model.algebra, Mode::Rational),
        l1: model.l1.to_string(),
        c: model.c,
        n: model.n(),
        v0_basis: model.v0_basis.iter().map(|x| strings(x)).collect(),
        g,
        a,
    })
}

/// Rebuilds the model from the stored algebra and `L1`, and requires the
/// stored invariants to agree with the rebuilt ones.
pub fn deserialize_model(source_name: &str, text: &str) -> Result<HypersurfaceModel<Rational>, IoError> {
    let file: ModelFile = parse_json(source_name, text)?;
    let alg_text = serde_json::to_string(&file.algebra).expect("in-memory serialization");
    let alg = deserialize_algebra(source_name, &alg_text)?.algebra;
    let l1 = parse_rational(source_name, "L1".into(), &file.l1)?;
    let model = build_model(&alg, l1).map_err(|error| IoError::Model { source_name: source_name.to_string(), error })?;
    let rebuilt: ModelFile = parse_json(source_name, &serialize_model(&model))?;
    for (field, same) in [
        ("n", rebuilt.n == file.n),
        ("v0_basis", rebuilt.v0_basis == file.v0_basis),
        ("g", rebuilt.g == file.g),
        ("A", rebuilt.a == file.a),
    ] {
        if !same {
            return Err(IoError::schema(source_name, field, "does not match the invariants of the stored algebra"));
        }
    }
    Ok(model)
}

/// A matrix of rationals, `[["p/q", …], …]`.
pub fn parse_matrix(source_name: &str, text: &str) -> Result<Mat<Rational>, IoError> {
    let rows: Vec<Vec<Rational>> = parse_json(source_name, text)?;
    let n = rows.len();
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(IoError::schema(source_name, format!("[{i}]"), format!("expected {n} entries, found {}", rows[i].len())));
    }
    Ok(Mat::from_rows(rows))
}

/// A `(1,2)` tensor `A[i][j][k]`.
pub fn parse_tensor(source_name: &str, text: &str) -> Result<Vec<Vec<Vec<Rational>>>, IoError> {
    let t: Vec<Vec<Vec<Rational>>> = parse_json(source_name, text)?;
    let n = t.len();
    for (i, row) in t.iter().enumerate() {
        if row.len() != n {
            return Err(IoError::schema(source_name, format!("[{i}]"), format!("expected {n} entries, found {}", row.len())));
        }
        if let Some(j) = row.iter().position(|v| v.len() != n) {
            return Err(IoError::schema(source_name, format!("[{i}][{j}]"), format!("expected {n} entries, found {}", row[j].len())));
        }
    }
    Ok(t)
}

/// `{"factors": [{"family", "params", "L1"}], "L1"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiSpecFile {
    pub factors: Vec<FactorEntry>,
    #[serde(rename = "L1")]
    pub l1: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub family: Family,
    #[serde(default)]
    pub params: FactorParams,
    #[serde(rename = "L1")]
    pub l1: Rational,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
}

impl FactorEntry {
    pub fn family_spec(&self) -> FamilySpec {
        FamilySpec {
            family: self.family,
            m: self.params.m,
            gamma: self.params.gamma.clone(),
            q: self.params.q.clone(),
            strict: self.params.strict.unwrap_or(true),
        }
    }
}

pub fn parse_calabi_spec(source_name: &str, text: &str) -> Result<CalabiSpec, IoError> {
    let file: CalabiSpecFile = parse_json(source_name, text)?;
    let factors = file
        .factors
        .iter()
        .enumerate()
        .map(|(a, f)| {
            let algebra = build(&f.family_spec()).map_err(|e| IoError::schema(source_name, format!("factors[{a}]"), e.to_string()))?;
            Ok(CalabiFactor { algebra, l1: f.l1.clone() })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(CalabiSpec::new(factors, file.l1))
}

/// One row per point, 17 significant digits.
pub fn write_points_csv<W: Write>(out: W, points: &[Vec<f64>]) -> Result<(), IoError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for p in points {
        w.write_record(p.iter().map(|x| format!("{x:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv(source_name: &str, text: &str) -> Result<Vec<Vec<f64>>, IoError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    r.records()
        .enumerate()
        .map(|(row, rec)| {
            rec?.iter()
                .enumerate()
                .map(|(col, s)| {
                    s.trim().parse().map_err(|e| IoError::schema(source_name, format!("row {row}, column {col}"), format!("{e}")))
                })
                .collect()
        })
        .collect()
}

pub fn points_json(points: &[Vec<f64>]) -> String {
    to_json(&points)
}
