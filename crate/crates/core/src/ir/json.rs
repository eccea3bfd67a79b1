//! JSON form of a circuit.
//!
//! ```json
//! {"width": 3, "discipline": "wf", "roles": ["input", "target", "ancilla"],
//!  "layers": [[{"kind": "cnot", "controls": [0], "neg": [], "targets": [1]}]]}
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs. Every float is written
//! with 17 significant digits so a parse reproduces the original bits.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind, Layer, LayeringDiscipline, QubitId, QubitRole};
use crate::matrix::Matrix;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed circuit JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("declared width {declared} but {roles} roles")]
    Width { declared: usize, roles: usize },
    #[error("unknown gate kind '{0}'")]
    UnknownKind(String),
    #[error("{kind} gate is missing field '{field}'")]
    MissingField { kind: String, field: &'static str },
    #[error("matrix with {0} entries is not square")]
    NotSquare(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Formats a float with 17 significant digits.
fn exact(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
struct CircuitOut<'a> {
    width: usize,
    discipline: LayeringDiscipline,
    roles: &'a [QubitRole],
    layers: Vec<Vec<GateOut>>,
}

#[derive(Serialize)]
struct GateOut {
    kind: &'static str,
    controls: Vec<usize>,
    neg: Vec<usize>,
    targets: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[Box<RawValue>; 2]>>,
}

#[derive(Deserialize)]
struct CircuitIn {
    width: usize,
    discipline: LayeringDiscipline,
    roles: Vec<QubitRole>,
    layers: Vec<Vec<GateIn>>,
}

#[derive(Deserialize)]
struct GateIn {
    kind: String,
    #[serde(default)]
    controls: Vec<usize>,
    #[serde(default)]
    neg: Vec<usize>,
    #[serde(default)]
    targets: Vec<usize>,
    theta: Option<f64>,
    q: Option<u32>,
    matrix: Option<Vec<[f64; 2]>>,
}

fn ids(v: &[QubitId]) -> Vec<usize> {
    v.iter().map(|q| q.0).collect()
}

fn gate_out(g: &Gate) -> GateOut {
    let mut out = GateOut {
        kind: g.kind().name(),
        controls: ids(g.controls()),
        neg: ids(g.negated()),
        targets: ids(g.targets()),
        theta: None,
        q: None,
        matrix: None,
    };
    match g.kind() {
        GateKind::SymmetricPhase(t) => out.theta = Some(exact(*t)),
        GateKind::ModQ(q) => out.q = Some(*q),
        GateKind::SingleQubitUnitary(m) | GateKind::ControlledU(m) => {
            out.matrix = Some(
                m.as_slice()
                    .iter()
                    .map(|z| [exact(z.re), exact(z.im)])
                    .collect(),
            )
        }
        _ => {}
    }
    out
}

fn gate_in(g: GateIn) -> Result<Gate, JsonError> {
    let missing = |field| JsonError::MissingField {
        kind: g.kind.clone(),
        field,
    };
    let matrix = || -> Result<Matrix, JsonError> {
        let entries = g.matrix.as_ref().ok_or_else(|| missing("matrix"))?;
        Matrix::from_row_major(
            entries
                .iter()
                .map(|[re, im]| Complex::new(*re, *im))
                .collect(),
        )
        .ok_or(JsonError::NotSquare(entries.len()))
    };
    let kind = match g.kind.as_str() {
        "single_qubit_unitary" => GateKind::SingleQubitUnitary(matrix()?),
        "toffoli" => GateKind::Toffoli,
        "controlled_u" => GateKind::ControlledU(matrix()?),
        "mod_q" => GateKind::ModQ(g.q.ok_or_else(|| missing("q"))?),
        "fanout" => GateKind::Fanout,
        "symmetric_phase" => GateKind::SymmetricPhase(g.theta.ok_or_else(|| missing("theta"))?),
        "hadamard" => GateKind::Hadamard,
        "pauli_x" => GateKind::PauliX,
        "cnot" => GateKind::ControlledNot,
        other => return Err(JsonError::UnknownKind(other.to_string())),
    };
    let q = |v: &[usize]| v.iter().copied().map(QubitId).collect();
    Ok(Gate::new(kind, q(&g.controls), q(&g.neg), q(&g.targets))?)
}

pub fn to_json(c: &Circuit) -> String {
    let doc = CircuitOut {
        width: c.width(),
        discipline: c.discipline(),
        roles: c.roles(),
        layers: c
            .layers()
            .iter()
            .map(|l| l.gates().iter().map(gate_out).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("circuit serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<Circuit, JsonError> {
    let doc: CircuitIn = serde_json::from_str(s)?;
    if doc.width != doc.roles.len() {
        return Err(JsonError::Width {
            declared: doc.width,
            roles: doc.roles.len(),
        });
    }
    let layers = doc
        .layers
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(gate_in)
                .collect::<Result<Vec<_>, _>>()
                .map(Layer::new)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Circuit::new(doc.roles, doc.discipline, layers)?)
}
