use std::fmt;

use serde::{Deserialize, Serialize};

use super::CircuitError;
use crate::matrix::Matrix;

/// Largest target block a [`GateKind::ControlledU`] may act on unless a
/// caller asks for more through [`Gate::controlled_u_with_limit`].
pub const DEFAULT_MAX_BLOCK_QUBITS: usize = 4;

/// Tolerance for accepting an explicit matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub(crate) fn mask(self) -> usize {
        1 << self.0
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

pub(crate) fn qubits(ix: impl IntoIterator<Item = usize>) -> Vec<QubitId> {
    ix.into_iter().map(QubitId).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitRole {
    Input,
    Target,
    Ancilla,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    SingleQubitUnitary(Matrix),
    /// Flips the target iff every control reads 1.
    Toffoli,
    /// Applies the matrix to the target block iff every control reads 1.
    /// Target `j` of the block is bit `j` of the block-local index.
    ControlledU(Matrix),
    /// Flips the target iff the number of controls reading 1 is not a
    /// multiple of the modulus.
    ModQ(u32),
    /// One control XORed onto every target.
    Fanout,
    /// Multiplies the amplitude of states with every qubit (controls and
    /// target) at 1 by `e^{i theta}`.
    SymmetricPhase(f64),
    Hadamard,
    PauliX,
    ControlledNot,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::SingleQubitUnitary(_) => "single_qubit_unitary",
            GateKind::Toffoli => "toffoli",
            GateKind::ControlledU(_) => "controlled_u",
            GateKind::ModQ(_) => "mod_q",
            GateKind::Fanout => "fanout",
            GateKind::SymmetricPhase(_) => "symmetric_phase",
            GateKind::Hadamard => "hadamard",
            GateKind::PauliX => "pauli_x",
            GateKind::ControlledNot => "cnot",
        }
    }

    /// True when the gate maps every basis state to a single basis state
    /// (possibly with a phase).
    pub fn is_monomial(&self) -> bool {
        !matches!(
            self,
            GateKind::SingleQubitUnitary(_) | GateKind::ControlledU(_) | GateKind::Hadamard
        )
    }
}

/// One primitive circuit element.
///
/// Constructed through the checked constructors below; every `Gate` value
/// satisfies its kind's arity rules, has disjoint control and target sets,
/// and carries only unitary matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    controls: Vec<QubitId>,
    negated: Vec<QubitId>,
    targets: Vec<QubitId>,
}

impl Gate {
    /// General checked constructor, used by deserialization.
    pub fn new(
        kind: GateKind,
        controls: Vec<QubitId>,
        negated: Vec<QubitId>,
        targets: Vec<QubitId>,
    ) -> Result<Self, CircuitError> {
        Self::with_limit(kind, controls, negated, targets, DEFAULT_MAX_BLOCK_QUBITS)
    }

    fn with_limit(
        kind: GateKind,
        controls: Vec<QubitId>,
        negated: Vec<QubitId>,
        targets: Vec<QubitId>,
        max_block: usize,
    ) -> Result<Self, CircuitError> {
        let gate = Gate {
            kind,
            controls,
            negated,
            targets,
        };
        gate.check(max_block)?;
        Ok(gate)
    }

    fn check(&self, max_block: usize) -> Result<(), CircuitError> {
        let name = self.kind.name();
        let arity = |ok: bool, expected: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(CircuitError::Arity {
                    kind: name,
                    expected,
                    controls: self.controls.len(),
                    targets: self.targets.len(),
                })
            }
        };
        let (nc, nt) = (self.controls.len(), self.targets.len());
        match &self.kind {
            GateKind::SingleQubitUnitary(_) | GateKind::Hadamard | GateKind::PauliX => {
                arity(nc == 0 && nt == 1, "no controls, one target")?
            }
            GateKind::ControlledNot => arity(nc == 1 && nt == 1, "one control, one target")?,
            GateKind::Toffoli => arity(nc >= 1 && nt == 1, "at least one control, one target")?,
            GateKind::ModQ(q) => {
                arity(nc >= 1 && nt == 1, "at least one control, one target")?;
                if *q < 2 {
                    return Err(CircuitError::Modulus(*q));
                }
            }
            GateKind::Fanout => arity(nc == 1 && nt >= 1, "one control, at least one target")?,
            GateKind::SymmetricPhase(theta) => {
                arity(nt == 1, "one target")?;
                if !theta.is_finite() {
                    return Err(CircuitError::NonFiniteAngle);
                }
            }
            GateKind::ControlledU(_) => {
                arity(nt >= 1, "at least one target")?;
                if nt > max_block {
                    return Err(CircuitError::BlockTooLarge {
                        qubits: nt,
                        limit: max_block,
                    });
                }
            }
        }
        if let GateKind::SingleQubitUnitary(m) | GateKind::ControlledU(m) = &self.kind {
            let expected = 1usize << nt;
            if m.dim() != expected {
                return Err(CircuitError::MatrixDimension {
                    expected,
                    found: m.dim(),
                });
            }
            if m.as_slice()
                .iter()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(CircuitError::NotUnitary {
                    error: f64::INFINITY,
                });
            }
            let error = m.unitarity_error();
            if error > UNITARY_TOL {
                return Err(CircuitError::NotUnitary { error });
            }
        }

        let mut seen = Vec::with_capacity(nc + nt);
        for q in self.controls.iter().chain(&self.targets) {
            if seen.contains(q) {
                return Err(CircuitError::DuplicateQubit {
                    kind: name,
                    qubit: *q,
                });
            }
            seen.push(*q);
        }
        let mut neg_seen = Vec::with_capacity(self.negated.len());
        for q in &self.negated {
            if !self.controls.contains(q) || neg_seen.contains(q) {
                return Err(CircuitError::NegatedNotControl { qubit: *q });
            }
            neg_seen.push(*q);
        }
        Ok(())
    }

    pub fn hadamard(target: impl Into<QubitId>) -> Self {
        Gate {
            kind: GateKind::Hadamard,
            controls: vec![],
            negated: vec![],
            targets: vec![target.into()],
        }
    }

    pub fn pauli_x(target: impl Into<QubitId>) -> Self {
        Gate {
            kind: GateKind::PauliX,
            controls: vec![],
            negated: vec![],
            targets: vec![target.into()],
        }
    }

    pub fn single_qubit(target: impl Into<QubitId>, u: Matrix) -> Result<Self, CircuitError> {
        Self::new(
            GateKind::SingleQubitUnitary(u),
            vec![],
            vec![],
            vec![target.into()],
        )
    }

    pub fn cnot(
        control: impl Into<QubitId>,
        target: impl Into<QubitId>,
    ) -> Result<Self, CircuitError> {
        Self::new(
            GateKind::ControlledNot,
            vec![control.into()],
            vec![],
            vec![target.into()],
        )
    }

    pub fn toffoli(
        controls: Vec<QubitId>,
        target: impl Into<QubitId>,
    ) -> Result<Self, CircuitError> {
        Self::new(GateKind::Toffoli, controls, vec![], vec![target.into()])
    }

    pub fn controlled_u(
        controls: Vec<QubitId>,
        targets: Vec<QubitId>,
        u: Matrix,
    ) -> Result<Self, CircuitError> {
        Self::controlled_u_with_limit(controls, targets, u, DEFAULT_MAX_BLOCK_QUBITS)
    }

    pub fn controlled_u_with_limit(
        controls: Vec<QubitId>,
        targets: Vec<QubitId>,
        u: Matrix,
        max_block: usize,
    ) -> Result<Self, CircuitError> {
        Self::with_limit(
            GateKind::ControlledU(u),
            controls,
            vec![],
            targets,
            max_block,
        )
    }

    pub fn mod_q(
        controls: Vec<QubitId>,
        q: u32,
        target: impl Into<QubitId>,
    ) -> Result<Self, CircuitError> {
        Self::new(GateKind::ModQ(q), controls, vec![], vec![target.into()])
    }

    pub fn fanout(
        control: impl Into<QubitId>,
        targets: Vec<QubitId>,
    ) -> Result<Self, CircuitError> {
        Self::new(GateKind::Fanout, vec![control.into()], vec![], targets)
    }

    pub fn symmetric_phase(
        controls: Vec<QubitId>,
        target: impl Into<QubitId>,
        theta: f64,
    ) -> Result<Self, CircuitError> {
        Self::new(
            GateKind::SymmetricPhase(theta),
            controls,
            vec![],
            vec![target.into()],
        )
    }

    /// Marks the given controls as negated (read through an X conjugation).
    pub fn negate(mut self, negated: Vec<QubitId>) -> Result<Self, CircuitError> {
        self.negated = negated;
        self.check(usize::MAX)?;
        Ok(self)
    }

    #[inline]
    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    #[inline]
    pub fn controls(&self) -> &[QubitId] {
        &self.controls
    }

    #[inline]
    pub fn negated(&self) -> &[QubitId] {
        &self.negated
    }

    #[inline]
    pub fn targets(&self) -> &[QubitId] {
        &self.targets
    }

    pub fn support(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls.iter().chain(&self.targets).copied()
    }

    pub fn max_qubit(&self) -> Option<QubitId> {
        self.support().max()
    }

    /// Bit mask of the controls and the value each must read for the gate
    /// to fire (negated controls fire on 0).
    pub(crate) fn control_pattern(&self) -> (usize, usize) {
        let mask = self.controls.iter().fold(0, |m, q| m | q.mask());
        let neg = self.negated.iter().fold(0, |m, q| m | q.mask());
        (mask, mask & !neg)
    }

    pub(crate) fn negation_mask(&self) -> usize {
        self.negated.iter().fold(0, |m, q| m | q.mask())
    }

    pub(crate) fn target_mask(&self) -> usize {
        self.targets.iter().fold(0, |m, q| m | q.mask())
    }

    pub fn adjoint(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::SingleQubitUnitary(m) => GateKind::SingleQubitUnitary(m.adjoint()),
            GateKind::ControlledU(m) => GateKind::ControlledU(m.adjoint()),
            GateKind::SymmetricPhase(theta) => GateKind::SymmetricPhase(-theta),
            k @ (GateKind::Toffoli
            | GateKind::ModQ(_)
            | GateKind::Fanout
            | GateKind::Hadamard
            | GateKind::PauliX
            | GateKind::ControlledNot) => k.clone(),
        };
        Gate {
            kind,
            ..self.clone()
        }
    }

    /// Copy of this gate with qubit `i` renamed to `map[i]`.
    pub fn remap(&self, map: &[QubitId]) -> Gate {
        let m = |v: &[QubitId]| v.iter().map(|q| map[q.0]).collect();
        Gate {
            kind: self.kind.clone(),
            controls: m(&self.controls),
            negated: m(&self.negated),
            targets: m(&self.targets),
        }
    }

    /// Same gate with negation metadata removed.
    pub(crate) fn without_negations(&self) -> Gate {
        Gate {
            negated: vec![],
            ..self.clone()
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match &self.kind {
            GateKind::ModQ(q) => write!(f, "[q={q}]")?,
            GateKind::SymmetricPhase(t) => write!(f, "[theta={t:.6}]")?,
            _ => {}
        }
        if !self.controls.is_empty() {
            let c: Vec<String> = self
                .controls
                .iter()
                .map(|q| {
                    if self.negated.contains(q) {
                        format!("!{}", q.0)
                    } else {
                        q.0.to_string()
                    }
                })
                .collect();
            write!(f, " c({})", c.join(","))?;
        }
        let t: Vec<String> = self.targets.iter().map(|q| q.0.to_string()).collect();
        write!(f, " t({})", t.join(","))
    }
}
