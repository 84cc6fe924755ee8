//! JSON file formats.
//!
//! State files hold exactly one of
//! `{"dim": d, "matrix": [[z, ...], ...]}`, `{"amplitudes": [z, ...]}` or
//! `{"weights": [x, ...]}`, where each complex `z` is `[re, im]` or a plain
//! real number. Protocol files hold
//! `{"branches": [{"id", "kraus", "probability"}], "p_max", "family"}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::CliError;
use crate::distill::{Branch, Protocol, StrictlyIncoherentKraus};
use crate::linalg::CMatrix;
use crate::states::{DensityMatrix, ProbabilityVector, PureStateVector};
use crate::Error;

/// Contents of a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Density(DensityMatrix),
    Pure(PureStateVector),
    Distribution(ProbabilityVector),
}

impl StateFile {
    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Density(_) => "density matrix",
            StateFile::Pure(_) => "pure state",
            StateFile::Distribution(_) => "distribution",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            StateFile::Density(r) => r.dim(),
            StateFile::Pure(p) => p.dim(),
            StateFile::Distribution(w) => w.len(),
        }
    }

    /// Density matrix view; pure states become projectors and
    /// distributions diagonal states.
    pub fn into_density(self) -> DensityMatrix {
        match self {
            StateFile::Density(r) => r,
            StateFile::Pure(p) => p.density(),
            StateFile::Distribution(w) => DensityMatrix::diagonal(&w),
        }
    }

    /// Probability vector view: a distribution, or the squared moduli of a
    /// pure state.
    pub fn into_distribution(self, path: &str) -> Result<ProbabilityVector, CliError> {
        match self {
            StateFile::Distribution(w) => Ok(w),
            StateFile::Pure(p) => ProbabilityVector::new(p.squared_moduli())
                .map_err(|e| CliError::Validation(format!("{path}: {e}"))),
            StateFile::Density(_) => {
                Err(CliError::Validation(format!("{path}: expected `weights` or `amplitudes`, found `matrix`")))
            }
        }
    }
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{path}: {msg}"))
}

fn parse_number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| invalid(path, "expected a finite number"))
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Number(_) => Ok(Complex64::new(parse_number(v, path)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(
            parse_number(&pair[0], &format!("{path}[0]"))?,
            parse_number(&pair[1], &format!("{path}[1]"))?,
        )),
        _ => Err(invalid(path, "expected [re, im] or a real number")),
    }
}

fn parse_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect(),
    )
}

pub fn amplitudes_json(psi: &PureStateVector) -> Value {
    Value::Array(psi.amplitudes().iter().map(|&z| complex_json(z)).collect())
}

fn parse_matrix(v: &Value, path: &str) -> Result<CMatrix, CliError> {
    let rows = parse_array(v, path)?;
    let n = rows.len();
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cells = parse_array(row, &rp)?;
        let row: Vec<Complex64> = cells
            .iter()
            .enumerate()
            .map(|(j, c)| parse_complex(c, &format!("{rp}[{j}]")))
            .collect::<Result<_, _>>()?;
        parsed.push(row);
    }
    let cols = parsed.first().map_or(0, Vec::len);
    if let Some((i, r)) = parsed.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(invalid(&format!("{path}[{i}]"), format!("row has {} entries, expected {cols}", r.len())));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| parsed[i][j]))
}

/// Attaches a JSON path to a state validation failure.
fn state_error(path: &str, e: Error) -> CliError {
    let located = match &e {
        Error::NotHermitian { row, col, .. } => format!("{path}[{row}][{col}]"),
        _ => path.to_string(),
    };
    invalid(&located, e)
}

pub fn parse_state(text: &str) -> Result<StateFile, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| invalid("$", e))?;
    let obj = root.as_object().ok_or_else(|| invalid("$", "expected an object"))?;
    let present: Vec<&str> =
        ["matrix", "amplitudes", "weights"].into_iter().filter(|k| obj.contains_key(*k)).collect();
    match present.as_slice() {
        ["matrix"] => {
            let m = parse_matrix(&obj["matrix"], "$.matrix")?;
            if let Some(dim) = obj.get("dim") {
                let dim = dim.as_u64().ok_or_else(|| invalid("$.dim", "expected a positive integer"))?;
                if dim as usize != m.nrows() {
                    return Err(invalid("$.dim", format!("declared {dim} but matrix has {} rows", m.nrows())));
                }
            }
            DensityMatrix::new(m).map(StateFile::Density).map_err(|e| state_error("$.matrix", e))
        }
        ["amplitudes"] => {
            let amps: Vec<Complex64> = parse_array(&obj["amplitudes"], "$.amplitudes")?
                .iter()
                .enumerate()
                .map(|(i, z)| parse_complex(z, &format!("$.amplitudes[{i}]")))
                .collect::<Result<_, _>>()?;
            PureStateVector::new(amps).map(StateFile::Pure).map_err(|e| state_error("$.amplitudes", e))
        }
        ["weights"] => {
            let w: Vec<f64> = parse_array(&obj["weights"], "$.weights")?
                .iter()
                .enumerate()
                .map(|(i, x)| parse_number(x, &format!("$.weights[{i}]")))
                .collect::<Result<_, _>>()?;
            ProbabilityVector::new(w).map(StateFile::Distribution).map_err(|e| state_error("$.weights", e))
        }
        [] => Err(invalid("$", "expected one of `matrix`, `amplitudes`, `weights`")),
        many => Err(invalid("$", format!("ambiguous state file: found {}", many.join(", ")))),
    }
}

pub fn density_file_json(rho: &DensityMatrix) -> Value {
    json!({ "dim": rho.dim(), "matrix": matrix_json(rho.matrix()) })
}

pub fn pure_file_json(psi: &PureStateVector) -> Value {
    json!({ "amplitudes": amplitudes_json(psi) })
}

pub fn weights_file_json(p: &ProbabilityVector) -> Value {
    json!({ "weights": p.as_slice() })
}

/// Serialized protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolFile {
    pub branches: Vec<BranchFile>,
    pub p_max: f64,
    pub family: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchFile {
    pub id: String,
    pub kraus: Vec<Vec<[f64; 2]>>,
    pub probability: f64,
}

impl ProtocolFile {
    pub fn from_protocol(p: &Protocol) -> Self {
        let branches = p
            .branches
            .iter()
            .map(|b| {
                let m = b.kraus.matrix();
                let kraus = (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect();
                BranchFile { id: b.id.clone(), kraus, probability: b.probability }
            })
            .collect();
        Self { branches, p_max: p.p_max, family: p.family.clone() }
    }

    /// Rebuilds the protocol, checking strict incoherence of every operator
    /// and completeness of the set.
    pub fn into_protocol(self) -> Result<Protocol, CliError> {
        let mut branches = Vec::with_capacity(self.branches.len());
        for (n, b) in self.branches.into_iter().enumerate() {
            let path = format!("$.branches[{n}].kraus");
            let rows = b.kraus.len();
            let cols = b.kraus.first().map_or(0, Vec::len);
            if rows == 0 || cols == 0 {
                return Err(invalid(&path, "empty Kraus matrix"));
            }
            if let Some(i) = b.kraus.iter().position(|r| r.len() != cols) {
                return Err(invalid(&format!("{path}[{i}]"), "ragged Kraus matrix"));
            }
            let m = CMatrix::from_fn(rows, cols, |i, j| Complex64::new(b.kraus[i][j][0], b.kraus[i][j][1]));
            let kraus = StrictlyIncoherentKraus::from_matrix(&m).map_err(|e| match e {
                Error::NotStrictlyIncoherent { reason, .. } => {
                    invalid(&path, Error::NotStrictlyIncoherent { id: b.id.clone(), reason })
                }
                other => invalid(&path, other),
            })?;
            branches.push(Branch { id: b.id, subspace: 0, kraus, probability: b.probability });
        }
        let protocol = Protocol { branches, p_max: self.p_max, family: self.family };
        protocol.check_complete().map_err(|e| invalid("$.branches", e))?;
        Ok(protocol)
    }
}

pub fn parse_protocol(text: &str) -> Result<Protocol, CliError> {
    let file: ProtocolFile = serde_json::from_str(text).map_err(|e| invalid("$", e))?;
    file.into_protocol()
}
