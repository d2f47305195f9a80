//! On-disk matrix format: a JSON document with explicit dimensions, a kind
//! tag (`state` or `operator`), an optional logarithm-base tag, and the dense
//! row-major entries as `[re, im]` pairs. Serialization uses the shortest
//! decimal representation that round-trips `f64` exactly, so save/load is
//! lossless and canonical files are byte-stable.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cvenn::linalg::{cplx, LogBase};
use cvenn::witness::OperatorKind;
use cvenn::{Matrix64, Operator64, State64};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    State,
    Operator,
}

impl std::fmt::Display for FileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FileKind::State => "state",
            FileKind::Operator => "operator",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileBase {
    Bits,
    Nats,
}

impl From<LogBase> for FileBase {
    fn from(base: LogBase) -> Self {
        match base {
            LogBase::Bits => FileBase::Bits,
            LogBase::Nats => FileBase::Nats,
        }
    }
}

impl From<FileBase> for LogBase {
    fn from(base: FileBase) -> Self {
        match base {
            FileBase::Bits => LogBase::Bits,
            FileBase::Nats => LogBase::Nats,
        }
    }
}

/// The serialized form of a state or operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dims: [usize; 2],
    pub kind: FileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<FileBase>,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_state(state: &State64) -> Self {
        MatrixFile {
            dims: [state.dims().0, state.dims().1],
            kind: FileKind::State,
            base: None,
            data: matrix_to_rows(state.matrix()),
        }
    }

    pub fn from_operator(op: &Operator64) -> Self {
        let base = match op.kind() {
            OperatorKind::Logarithmic(base) => Some(base.into()),
            OperatorKind::Dimensionless => None,
        };
        MatrixFile {
            dims: [op.dims().0, op.dims().1],
            kind: FileKind::Operator,
            base,
            data: matrix_to_rows(op.matrix()),
        }
    }

    fn to_matrix(&self) -> Result<Matrix64, CliError> {
        let [da, db] = self.dims;
        if da == 0 || db == 0 {
            return Err(CliError::Parse(format!(
                "field `dims`: dimensions must be positive, got [{da}, {db}]"
            )));
        }
        let n = da * db;
        if self.data.len() != n * n {
            return Err(CliError::Parse(format!(
                "field `data`: expected {} entries for dims [{da}, {db}], got {}",
                n * n,
                self.data.len()
            )));
        }
        Ok(Matrix64::from_fn(n, n, |i, j| {
            let [re, im] = self.data[i * n + j];
            cplx(re, im)
        }))
    }

    /// Validates and converts to a density matrix. The file must be tagged
    /// `kind: state`.
    pub fn to_state(&self) -> Result<State64, CliError> {
        if self.kind != FileKind::State {
            return Err(CliError::KindMismatch {
                expected: FileKind::State,
                found: self.kind,
            });
        }
        let m = self.to_matrix()?;
        Ok(State64::new(m, (self.dims[0], self.dims[1]))?)
    }

    /// Validates and converts to a Hermitian operator. The file must be
    /// tagged `kind: operator`.
    pub fn to_operator(&self) -> Result<Operator64, CliError> {
        if self.kind != FileKind::Operator {
            return Err(CliError::KindMismatch {
                expected: FileKind::Operator,
                found: self.kind,
            });
        }
        let m = self.to_matrix()?;
        let kind = match self.base {
            Some(base) => OperatorKind::Logarithmic(base.into()),
            None => OperatorKind::Dimensionless,
        };
        Ok(Operator64::new(m, (self.dims[0], self.dims[1]), kind)?)
    }
}

fn matrix_to_rows(m: &Matrix64) -> Vec<[f64; 2]> {
    let n = m.rows();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            rows.push([z.re, z.im]);
        }
    }
    rows
}

/// Reads and parses a matrix file.
pub fn load_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Parse(format!(
            "{} at line {} column {}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Serializes and writes a matrix file (pretty-printed, trailing newline).
pub fn save_matrix(path: &Path, file: &MatrixFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(file)
        .map_err(|e| CliError::Parse(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

pub fn load_state(path: &Path) -> Result<State64, CliError> {
    load_matrix(path)?.to_state()
}

pub fn load_operator(path: &Path) -> Result<Operator64, CliError> {
    load_matrix(path)?.to_operator()
}

pub fn save_state(path: &Path, state: &State64) -> Result<(), CliError> {
    save_matrix(path, &MatrixFile::from_state(state))
}

pub fn save_operator(path: &Path, op: &Operator64) -> Result<(), CliError> {
    save_matrix(path, &MatrixFile::from_operator(op))
}
