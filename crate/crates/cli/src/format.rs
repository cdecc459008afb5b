//! JSON file formats. A complex scalar is `[re, im]`, a vector is an array
//! of complex scalars and a matrix is an array of rows.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! save/load cycle bit for bit.

use std::fs;
use std::io;
use std::path::Path;

use premeasure_core::{C64, Ket64, MeasurementModel64, Operator64, SpectralForm64, Tolerance64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFile {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub observable: SpectralFile,
    pub pointer: SpectralFile,
    pub instrument_state: Vec<Complex>,
    pub unitary: Matrix,
}

/// Input accepted by `build`: a spectral form, `{"matrix": ...}`, or a bare
/// Hermitian matrix.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ObservableFile {
    Spectral(SpectralFile),
    Wrapped { matrix: Matrix },
    Matrix(Matrix),
}

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn field_err(field: &str, e: impl std::fmt::Display) -> InputError {
    InputError(format!("{field}: {e}"))
}

fn complex(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

fn pair(z: &C64) -> Complex {
    [z.re, z.im]
}

pub fn matrix_to_operator(field: &str, m: &Matrix) -> Result<Operator64, InputError> {
    if m.is_empty() {
        return Err(field_err(field, "empty matrix"));
    }
    let rows = m.iter().map(|r| r.iter().copied().map(complex).collect()).collect();
    Operator64::from_rows(rows).map_err(|e| field_err(field, e))
}

pub fn operator_to_matrix(op: &Operator64) -> Matrix {
    op.rows().map(|r| r.iter().map(pair).collect()).collect()
}

pub fn vector_to_ket(field: &str, v: &[Complex], tol: Tolerance64) -> Result<Ket64, InputError> {
    Ket64::new(v.iter().copied().map(complex).collect(), tol).map_err(|e| field_err(field, e))
}

impl SpectralFile {
    pub fn from_form(sf: &SpectralForm64) -> Self {
        Self {
            eigenvalues: sf.eigenvalues().to_vec(),
            projectors: sf.projectors().iter().map(operator_to_matrix).collect(),
        }
    }

    pub fn to_form(&self, field: &str, tol: Tolerance64) -> Result<SpectralForm64, InputError> {
        let projectors = self
            .projectors
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_to_operator(&format!("{field}.projectors[{k}]"), m))
            .collect::<Result<Vec<_>, _>>()?;
        SpectralForm64::new(self.eigenvalues.clone(), projectors, tol).map_err(|e| field_err(field, e))
    }
}

impl ModelFile {
    pub fn from_model(m: &MeasurementModel64) -> Self {
        Self {
            dim_a: m.dim_a(),
            dim_b: m.dim_b(),
            observable: SpectralFile::from_form(m.observable()),
            pointer: SpectralFile::from_form(m.pointer()),
            instrument_state: m.instrument_state().amplitudes().iter().map(pair).collect(),
            unitary: operator_to_matrix(m.unitary()),
        }
    }

    pub fn to_model(&self, tol: Tolerance64) -> Result<MeasurementModel64, InputError> {
        let observable = self.observable.to_form("observable", tol)?;
        if observable.dim() != self.dim_a {
            return Err(field_err(
                "dim_a",
                format!("declared {} but observable acts on dimension {}", self.dim_a, observable.dim()),
            ));
        }
        let pointer = self.pointer.to_form("pointer", tol)?;
        if pointer.dim() != self.dim_b {
            return Err(field_err(
                "dim_b",
                format!("declared {} but pointer acts on dimension {}", self.dim_b, pointer.dim()),
            ));
        }
        let state = vector_to_ket("instrument_state", &self.instrument_state, tol)?;
        let unitary = matrix_to_operator("unitary", &self.unitary)?;
        MeasurementModel64::new(observable, pointer, state, unitary, tol).map_err(|e| InputError(e.to_string()))
    }
}

/// Pretty objects, inline arrays, `f64` in `{:.16e}`.
#[derive(Default)]
struct FileFormatter {
    depth: usize,
    nonempty: Vec<bool>,
}

impl FileFormatter {
    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.depth {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for FileFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.depth += 1;
        self.nonempty.push(false);
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.depth -= 1;
        if self.nonempty.pop().unwrap_or(false) {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if let Some(flag) = self.nonempty.last_mut() {
            *flag = true;
        }
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// Serializes `value` in the canonical file layout, with a trailing newline.
pub fn to_canonical_json<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FileFormatter::default());
    value.serialize(&mut ser).expect("serialization to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Parses `text`, naming the JSON path of the first offending field.
pub fn parse_json<D: DeserializeOwned>(text: &str) -> Result<D, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." || path.is_empty() {
            InputError(e.into_inner().to_string())
        } else {
            InputError(format!("{path}: {}", e.into_inner()))
        }
    })
}

pub fn load_json<D: DeserializeOwned>(path: &Path) -> Result<D, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn load_model(path: &Path, tol: Tolerance64) -> Result<MeasurementModel64, InputError> {
    let file: ModelFile = load_json(path)?;
    file.to_model(tol).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn save_model(model: &MeasurementModel64) -> String {
    to_canonical_json(&ModelFile::from_model(model))
}

pub fn load_ket(path: &Path, tol: Tolerance64) -> Result<Ket64, InputError> {
    let v: Vec<Complex> = load_json(path)?;
    vector_to_ket(&path.display().to_string(), &v, tol)
}

pub fn load_operator(path: &Path) -> Result<Operator64, InputError> {
    let m: Matrix = load_json(path)?;
    matrix_to_operator(&path.display().to_string(), &m)
}

pub fn ket_to_json(psi: &Ket64) -> String {
    to_canonical_json(&psi.amplitudes().iter().map(pair).collect::<Vec<_>>())
}

pub fn operator_to_json(op: &Operator64) -> String {
    to_canonical_json(&operator_to_matrix(op))
}
