//! Circuit intermediate representation: gates, layers, layering
//! disciplines and resource accounting.

mod gate;
pub mod json;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use gate::qubits;
pub use gate::{Gate, GateKind, QubitId, QubitRole, DEFAULT_MAX_BLOCK_QUBITS, UNITARY_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} is outside a register of width {width}")]
    QubitOutOfRange { qubit: QubitId, width: usize },
    #[error("gates {first} and {second} in one layer both act on {qubit}")]
    OverlappingSupports {
        first: usize,
        second: usize,
        qubit: QubitId,
    },
    #[error("gates {first} and {second} in one layer both target {qubit}")]
    OverlappingTargets {
        first: usize,
        second: usize,
        qubit: QubitId,
    },
    #[error(
        "gate {writer} targets {qubit}, which gate {reader} in the same layer reads as a control"
    )]
    TargetReadInLayer {
        writer: usize,
        reader: usize,
        qubit: QubitId,
    },
    #[error("gate {gate} is a fanout gate, which the strict discipline does not allow")]
    FanoutUnderStrict { gate: usize },
    #[error("{kind} gate needs {expected}, got {controls} controls and {targets} targets")]
    Arity {
        kind: &'static str,
        expected: &'static str,
        controls: usize,
        targets: usize,
    },
    #[error("{kind} gate names {qubit} twice")]
    DuplicateQubit { kind: &'static str, qubit: QubitId },
    #[error("negated qubit {qubit} is not a control of its gate")]
    NegatedNotControl { qubit: QubitId },
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u32),
    #[error("phase angle must be finite")]
    NonFiniteAngle,
    #[error("matrix dimension {found} does not match the {expected}-dimensional target block")]
    MatrixDimension { expected: usize, found: usize },
    #[error("matrix is not unitary (max |U^dagger U - I| = {error:e})")]
    NotUnitary { error: f64 },
    #[error("target block of {qubits} qubits exceeds the limit of {limit}")]
    BlockTooLarge { qubits: usize, limit: usize },
    #[error("register widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("qubit roles differ at {qubit}")]
    RoleMismatch { qubit: QubitId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LayeringDiscipline {
    /// Every pair of gates in a layer acts on disjoint qubits.
    #[default]
    #[serde(rename = "strict")]
    Strict,
    /// Gates may share controls, but targets are pairwise disjoint and no
    /// gate writes a qubit another gate in the layer reads.
    #[serde(rename = "wf")]
    WithFanout,
}

impl LayeringDiscipline {
    pub fn name(self) -> &'static str {
        match self {
            LayeringDiscipline::Strict => "strict",
            LayeringDiscipline::WithFanout => "wf",
        }
    }

    /// The less restrictive of two disciplines.
    pub fn join(self, other: Self) -> Self {
        if self == LayeringDiscipline::WithFanout || other == LayeringDiscipline::WithFanout {
            LayeringDiscipline::WithFanout
        } else {
            LayeringDiscipline::Strict
        }
    }
}

impl std::str::FromStr for LayeringDiscipline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Self::Strict),
            "wf" | "with-fanout" => Ok(Self::WithFanout),
            other => Err(format!(
                "unknown discipline '{other}' (expected strict or wf)"
            )),
        }
    }
}

/// Gates applied simultaneously.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    gates: Vec<Gate>,
}

impl Layer {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn adjoint(&self) -> Layer {
        Layer::new(self.gates.iter().map(Gate::adjoint).collect())
    }

    pub fn remap(&self, map: &[QubitId]) -> Layer {
        Layer::new(self.gates.iter().map(|g| g.remap(map)).collect())
    }
}

impl From<Vec<Gate>> for Layer {
    fn from(gates: Vec<Gate>) -> Self {
        Layer::new(gates)
    }
}

/// Checks one layer against a discipline. On rejection the error names the
/// first conflicting gate pair in index order.
pub fn validate_layer(
    layer: &Layer,
    discipline: LayeringDiscipline,
    width: usize,
) -> Result<(), CircuitError> {
    for g in &layer.gates {
        if let Some(q) = g.max_qubit().filter(|q| q.0 >= width) {
            return Err(CircuitError::QubitOutOfRange { qubit: q, width });
        }
    }
    if discipline == LayeringDiscipline::Strict {
        if let Some(i) = layer
            .gates
            .iter()
            .position(|g| matches!(g.kind(), GateKind::Fanout) && g.targets().len() > 1)
        {
            return Err(CircuitError::FanoutUnderStrict { gate: i });
        }
    }
    for (i, a) in layer.gates.iter().enumerate() {
        for (j, b) in layer.gates.iter().enumerate().skip(i + 1) {
            match discipline {
                LayeringDiscipline::Strict => {
                    if let Some(q) = a.support().find(|q| b.support().any(|r| r == *q)) {
                        return Err(CircuitError::OverlappingSupports {
                            first: i,
                            second: j,
                            qubit: q,
                        });
                    }
                }
                LayeringDiscipline::WithFanout => {
                    if let Some(q) = a.targets().iter().find(|q| b.targets().contains(q)) {
                        return Err(CircuitError::OverlappingTargets {
                            first: i,
                            second: j,
                            qubit: *q,
                        });
                    }
                    if let Some(q) = a.targets().iter().find(|q| b.controls().contains(q)) {
                        return Err(CircuitError::TargetReadInLayer {
                            writer: i,
                            reader: j,
                            qubit: *q,
                        });
                    }
                    if let Some(q) = b.targets().iter().find(|q| a.controls().contains(q)) {
                        return Err(CircuitError::TargetReadInLayer {
                            writer: j,
                            reader: i,
                            qubit: *q,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// An ordered list of validated layers over a register with fixed roles.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    roles: Vec<QubitRole>,
    layers: Vec<Layer>,
    discipline: LayeringDiscipline,
}

impl Circuit {
    pub fn new(
        roles: Vec<QubitRole>,
        discipline: LayeringDiscipline,
        layers: Vec<Layer>,
    ) -> Result<Self, CircuitError> {
        let width = roles.len();
        for layer in &layers {
            validate_layer(layer, discipline, width)?;
        }
        Ok(Self {
            roles,
            layers: layers.into_iter().filter(|l| !l.is_empty()).collect(),
            discipline,
        })
    }

    pub fn empty(roles: Vec<QubitRole>, discipline: LayeringDiscipline) -> Self {
        Self {
            roles,
            layers: vec![],
            discipline,
        }
    }

    pub fn width(&self) -> usize {
        self.roles.len()
    }

    /// Number of layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn ancilla_count(&self) -> usize {
        self.with_role(QubitRole::Ancilla).len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    pub fn role(&self, q: QubitId) -> QubitRole {
        self.roles[q.0]
    }

    pub fn with_role(&self, role: QubitRole) -> Vec<QubitId> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == role)
            .map(|(i, _)| QubitId(i))
            .collect()
    }

    /// Inputs followed by targets, in register order within each group.
    pub fn data_qubits(&self) -> Vec<QubitId> {
        let mut d = self.with_role(QubitRole::Input);
        d.extend(self.with_role(QubitRole::Target));
        d
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn discipline(&self) -> LayeringDiscipline {
        self.discipline
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    /// `a` followed by `b`. The result uses the looser of the two
    /// disciplines.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.width() != other.width() {
            return Err(CircuitError::WidthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        if let Some(i) = (0..self.width()).find(|&i| self.roles[i] != other.roles[i]) {
            return Err(CircuitError::RoleMismatch { qubit: QubitId(i) });
        }
        Ok(Circuit {
            roles: self.roles.clone(),
            layers: self.layers.iter().chain(&other.layers).cloned().collect(),
            discipline: self.discipline.join(other.discipline),
        })
    }

    /// Reversed layer order with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            roles: self.roles.clone(),
            layers: self.layers.iter().rev().map(Layer::adjoint).collect(),
            discipline: self.discipline,
        }
    }

    /// Re-validates under another discipline.
    pub fn with_discipline(&self, discipline: LayeringDiscipline) -> Result<Circuit, CircuitError> {
        Circuit::new(self.roles.clone(), discipline, self.layers.clone())
    }

    /// Expands negated controls into explicit X layers around each gate
    /// layer that uses them. Layers whose gates disagree on the polarity
    /// of a shared control are split so every expanded layer stays valid.
    pub fn lower_negations(&self) -> Circuit {
        let mut layers = Vec::new();
        for layer in &self.layers {
            for group in polarity_groups(layer) {
                let neg = group.iter().fold(0usize, |m, g| m | g.negation_mask());
                let xs: Vec<Gate> = (0..self.width())
                    .filter(|i| neg >> i & 1 == 1)
                    .map(Gate::pauli_x)
                    .collect();
                if !xs.is_empty() {
                    layers.push(Layer::new(xs.clone()));
                }
                layers.push(Layer::new(
                    group.iter().map(|g| g.without_negations()).collect(),
                ));
                if !xs.is_empty() {
                    layers.push(Layer::new(xs));
                }
            }
        }
        Circuit {
            roles: self.roles.clone(),
            layers,
            discipline: self.discipline,
        }
    }
}

/// Splits a layer so that within each group every control qubit is read
/// with one polarity.
fn polarity_groups(layer: &Layer) -> Vec<Vec<&Gate>> {
    let mut groups: Vec<(usize, usize, Vec<&Gate>)> = Vec::new();
    for g in &layer.gates {
        let (mask, _) = g.control_pattern();
        let neg = g.negation_mask();
        let slot = groups
            .iter_mut()
            .find(|(gm, gn, _)| (gm & mask) & (gn ^ neg) == 0);
        match slot {
            Some((gm, gn, gates)) => {
                *gm |= mask;
                *gn |= neg;
                gates.push(g);
            }
            None => groups.push((mask, neg, vec![g])),
        }
    }
    groups.into_iter().map(|(_, _, g)| g).collect()
}

/// Assembles a circuit layer by layer; validation happens in
/// [`CircuitBuilder::build`].
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    roles: Vec<QubitRole>,
    discipline: LayeringDiscipline,
    layers: Vec<Layer>,
}

impl CircuitBuilder {
    pub fn new(roles: Vec<QubitRole>, discipline: LayeringDiscipline) -> Self {
        Self {
            roles,
            discipline,
            layers: vec![],
        }
    }

    pub fn width(&self) -> usize {
        self.roles.len()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&mut self, gates: impl Into<Layer>) -> &mut Self {
        let layer = gates.into();
        if !layer.is_empty() {
            self.layers.push(layer);
        }
        self
    }

    pub fn layers(&mut self, layers: impl IntoIterator<Item = Layer>) -> &mut Self {
        for l in layers {
            self.layer(l);
        }
        self
    }

    /// Appends `sub`'s layers with its qubit `i` renamed to `map[i]`.
    pub fn append_mapped(&mut self, sub: &Circuit, map: &[QubitId]) -> &mut Self {
        assert!(
            map.len() >= sub.width(),
            "qubit map shorter than sub-circuit"
        );
        for l in sub.layers() {
            self.layer(l.remap(map));
        }
        self
    }

    /// Current layers, for building an inverse phase.
    pub fn snapshot(&self) -> Vec<Layer> {
        self.layers.clone()
    }

    pub fn build(&self) -> Result<Circuit, CircuitError> {
        Circuit::new(self.roles.clone(), self.discipline, self.layers.clone())
    }
}

/// Runs parallel layer sequences side by side: layer `i` of the result
/// holds layer `i` of every sequence.
pub fn zip_layers(parts: Vec<Vec<Layer>>) -> Vec<Layer> {
    let depth = parts.iter().map(Vec::len).max().unwrap_or(0);
    (0..depth)
        .map(|i| {
            Layer::new(
                parts
                    .iter()
                    .filter_map(|p| p.get(i))
                    .flat_map(|l| l.gates.iter().cloned())
                    .collect(),
            )
        })
        .collect()
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roles: String = self
            .roles
            .iter()
            .map(|r| match r {
                QubitRole::Input => 'i',
                QubitRole::Target => 't',
                QubitRole::Ancilla => 'a',
            })
            .collect();
        writeln!(
            f,
            "circuit width={} depth={} discipline={} roles={}",
            self.width(),
            self.depth(),
            self.discipline.name(),
            roles
        )?;
        for (i, layer) in self.layers.iter().enumerate() {
            let gates: Vec<String> = layer.gates.iter().map(Gate::to_string).collect();
            writeln!(f, "  {i:>3}: {}", gates.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LayeringDiscipline::*;

    fn cx(c: usize, t: usize) -> Gate {
        Gate::cnot(c, t).unwrap()
    }

    #[test]
    fn disjoint_cnots_pass_strict() {
        let l = Layer::new(vec![cx(0, 1), cx(2, 3)]);
        assert!(validate_layer(&l, Strict, 4).is_ok());
    }

    #[test]
    fn shared_control_needs_fanout_discipline() {
        let l = Layer::new(vec![cx(0, 1), cx(0, 2)]);
        assert_eq!(
            validate_layer(&l, Strict, 3),
            Err(CircuitError::OverlappingSupports {
                first: 0,
                second: 1,
                qubit: QubitId(0)
            })
        );
        assert!(validate_layer(&l, WithFanout, 3).is_ok());
    }

    #[test]
    fn shared_target_rejected_under_fanout_discipline() {
        let l = Layer::new(vec![cx(0, 1), cx(2, 1)]);
        assert_eq!(
            validate_layer(&l, WithFanout, 3),
            Err(CircuitError::OverlappingTargets {
                first: 0,
                second: 1,
                qubit: QubitId(1)
            })
        );
    }

    #[test]
    fn chained_gates_rejected_under_fanout_discipline() {
        let l = Layer::new(vec![cx(0, 1), cx(1, 2)]);
        assert!(matches!(
            validate_layer(&l, WithFanout, 3),
            Err(CircuitError::TargetReadInLayer {
                writer: 0,
                reader: 1,
                ..
            })
        ));
    }

    #[test]
    fn out_of_range_qubit() {
        let l = Layer::new(vec![cx(0, 5)]);
        assert_eq!(
            validate_layer(&l, WithFanout, 3),
            Err(CircuitError::QubitOutOfRange {
                qubit: QubitId(5),
                width: 3
            })
        );
    }

    #[test]
    fn strict_rejects_fanout_gates() {
        let l = Layer::new(vec![Gate::fanout(0, qubits([1, 2])).unwrap()]);
        assert_eq!(
            validate_layer(&l, Strict, 3),
            Err(CircuitError::FanoutUnderStrict { gate: 0 })
        );
        assert!(validate_layer(&l, WithFanout, 3).is_ok());
    }

    #[test]
    fn depth_and_accounting() {
        let roles = vec![QubitRole::Input, QubitRole::Target, QubitRole::Ancilla];
        let empty = Circuit::empty(roles.clone(), Strict);
        assert_eq!(empty.depth(), 0);
        assert_eq!(empty.ancilla_count(), 1);
        let c = Circuit::new(
            roles,
            Strict,
            vec![vec![cx(0, 2)].into(), vec![cx(2, 1)].into()],
        )
        .unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.width(), 3);
        let cc = c.compose(&c.inverse()).unwrap();
        assert_eq!(cc.depth(), 4);
    }

    #[test]
    fn compose_checks_width_and_roles() {
        let a = Circuit::empty(vec![QubitRole::Input; 2], Strict);
        let b = Circuit::empty(vec![QubitRole::Input; 3], Strict);
        assert!(matches!(
            a.compose(&b),
            Err(CircuitError::WidthMismatch { .. })
        ));
        let c = Circuit::empty(vec![QubitRole::Input, QubitRole::Ancilla], Strict);
        assert!(matches!(
            a.compose(&c),
            Err(CircuitError::RoleMismatch { .. })
        ));
    }

    #[test]
    fn inverse_reverses_layers() {
        let c = Circuit::new(
            vec![QubitRole::Input; 2],
            Strict,
            vec![
                vec![Gate::hadamard(0)].into(),
                vec![Gate::symmetric_phase(qubits([0]), 1, 1.0).unwrap()].into(),
            ],
        )
        .unwrap();
        let inv = c.inverse();
        assert_eq!(inv.layers()[1].gates()[0], Gate::hadamard(0));
        assert_eq!(
            inv.layers()[0].gates()[0],
            Gate::symmetric_phase(qubits([0]), 1, -1.0).unwrap()
        );
    }

    #[test]
    fn lowering_splits_mixed_polarity() {
        let a = Gate::toffoli(qubits([0, 1]), 2)
            .unwrap()
            .negate(qubits([0]))
            .unwrap();
        let b = Gate::cnot(0, 3).unwrap();
        let c = Circuit::new(
            vec![QubitRole::Input; 4],
            WithFanout,
            vec![vec![a, b].into()],
        )
        .unwrap();
        let low = c.lower_negations();
        // X, toffoli, X, then the plain cnot
        assert_eq!(low.depth(), 4);
        assert!(low.gates().all(|g| g.negated().is_empty()));
        assert!(low.with_discipline(WithFanout).is_ok());
    }
}
