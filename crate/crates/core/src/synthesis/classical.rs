//! Layered Boolean circuits and their garbage-free reversible embedding.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SynthError;
use crate::ir::{Circuit, CircuitBuilder, Gate, Layer, LayeringDiscipline, QubitId, QubitRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    And,
    Or,
    Not,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wire {
    Input(usize),
    /// Output of gate `index` in layer `layer`.
    Gate {
        layer: usize,
        index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolGate {
    pub op: BoolOp,
    pub inputs: Vec<Wire>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("circuit has no layers")]
    NoLayers,
    #[error("layer {0} is empty")]
    EmptyLayer(usize),
    #[error("gate {index} in layer {layer} has no inputs")]
    NoInputs { layer: usize, index: usize },
    #[error("NOT gate {index} in layer {layer} needs exactly one input")]
    NotArity { layer: usize, index: usize },
    #[error("gate {index} in layer {layer} reads undefined wire {wire:?}")]
    UndefinedWire {
        layer: usize,
        index: usize,
        wire: Wire,
    },
}

/// A layered Boolean circuit. Gates read inputs or outputs of strictly
/// earlier layers; the gates of the last layer are the circuit's outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCircuit {
    inputs: usize,
    layers: Vec<Vec<BoolGate>>,
}

impl ClassicalCircuit {
    pub fn new(inputs: usize, layers: Vec<Vec<BoolGate>>) -> Result<Self, ClassicalError> {
        let c = Self { inputs, layers };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        if self.layers.is_empty() {
            return Err(ClassicalError::NoLayers);
        }
        for (l, layer) in self.layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(ClassicalError::EmptyLayer(l));
            }
            for (index, g) in layer.iter().enumerate() {
                if g.inputs.is_empty() {
                    return Err(ClassicalError::NoInputs { layer: l, index });
                }
                if g.op == BoolOp::Not && g.inputs.len() != 1 {
                    return Err(ClassicalError::NotArity { layer: l, index });
                }
                for &wire in &g.inputs {
                    let ok = match wire {
                        Wire::Input(i) => i < self.inputs,
                        Wire::Gate { layer, index } => {
                            layer < l && index < self.layers[layer].len()
                        }
                    };
                    if !ok {
                        return Err(ClassicalError::UndefinedWire {
                            layer: l,
                            index,
                            wire,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.layers.last().map_or(0, Vec::len)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Most gates in any layer.
    pub fn width(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn layers(&self) -> &[Vec<BoolGate>] {
        &self.layers
    }

    /// Evaluates on input bits `x` (input `i` is bit `i`) and packs the
    /// outputs the same way.
    pub fn evaluate(&self, x: usize) -> usize {
        let mut values: Vec<Vec<bool>> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let row = layer
                .iter()
                .map(|g| {
                    let mut bits = g.inputs.iter().map(|w| match *w {
                        Wire::Input(i) => x >> i & 1 == 1,
                        Wire::Gate { layer, index } => values[layer][index],
                    });
                    match g.op {
                        BoolOp::And => bits.all(|b| b),
                        BoolOp::Or => bits.any(|b| b),
                        BoolOp::Not => !bits.next().unwrap(),
                        BoolOp::Xor => bits.fold(false, |a, b| a ^ b),
                    }
                })
                .collect();
            values.push(row);
        }
        values
            .last()
            .unwrap()
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | (b as usize) << j)
    }

    /// A random well-formed circuit with `inputs` inputs, `depth` layers of
    /// `1..=max_width` gates and fan-in `1..=max_fanin`. Wires within one
    /// gate are distinct.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        inputs: usize,
        depth: usize,
        max_width: usize,
        max_fanin: usize,
    ) -> Self {
        assert!(inputs >= 1 && depth >= 1 && max_width >= 1 && max_fanin >= 1);
        let mut layers: Vec<Vec<BoolGate>> = Vec::with_capacity(depth);
        for l in 0..depth {
            let mut wires: Vec<Wire> = (0..inputs).map(Wire::Input).collect();
            for (pl, prev) in layers.iter().enumerate() {
                wires.extend((0..prev.len()).map(|index| Wire::Gate { layer: pl, index }));
            }
            let w = rng.gen_range(1..=max_width);
            let layer = (0..w)
                .map(|_| {
                    let op = *[BoolOp::And, BoolOp::Or, BoolOp::Not, BoolOp::Xor]
                        .choose(rng)
                        .unwrap();
                    let fanin = if op == BoolOp::Not {
                        1
                    } else {
                        rng.gen_range(1..=max_fanin.min(wires.len()))
                    };
                    // At least one wire from the previous layer keeps every layer load-bearing.
                    let mut picked: Vec<Wire> =
                        wires.choose_multiple(rng, fanin).copied().collect();
                    if l > 0
                        && !picked
                            .iter()
                            .any(|w| matches!(w, Wire::Gate { layer, .. } if *layer == l - 1))
                    {
                        picked[0] = Wire::Gate {
                            layer: l - 1,
                            index: rng.gen_range(0..layers[l - 1].len()),
                        };
                    }
                    BoolGate { op, inputs: picked }
                })
                .collect();
            layers.push(layer);
        }
        Self { inputs, layers }
    }
}

/// Reversible embedding on `n + m + w*d` qubits with depth `2d - 1`.
///
/// Qubits `0..n` keep the input, `n..n+m` receive `y ^ f(x)`, and gate
/// `index` of layer `l` owns ancilla `n + m + l*w + index`. Layers
/// `0..d-1` write their gates into ancillae, the last layer XORs straight
/// into the outputs, and the earlier layers are then replayed backwards to
/// clear the ancillae. Gate forms: AND is a Toffoli, XOR a MOD_2 gate, NOT
/// a CNOT with a negated control, and an OR of `r` distinct wires a MOD_{r+1}
/// gate (it flips iff the count of true wires is nonzero).
pub fn reversible_embed(c: &ClassicalCircuit) -> Result<Circuit, SynthError> {
    c.validate()?;
    let (n, m, w, d) = (c.inputs(), c.outputs(), c.width(), c.depth());
    let mut roles = vec![QubitRole::Input; n];
    roles.extend(std::iter::repeat(QubitRole::Target).take(m));
    roles.extend(std::iter::repeat(QubitRole::Ancilla).take(w * d));
    let ancilla = |layer: usize, index: usize| QubitId(n + m + layer * w + index);
    let qubit = |wire: &Wire| match *wire {
        Wire::Input(i) => QubitId(i),
        Wire::Gate { layer, index } => ancilla(layer, index),
    };

    let mut layers = Vec::with_capacity(d);
    for (l, layer) in c.layers().iter().enumerate() {
        let mut gates = Vec::with_capacity(layer.len());
        for (index, g) in layer.iter().enumerate() {
            let target = if l + 1 == d {
                QubitId(n + index)
            } else {
                ancilla(l, index)
            };
            let mut wires: Vec<QubitId> = g.inputs.iter().map(qubit).collect();
            let gate = match g.op {
                BoolOp::And => {
                    dedup(&mut wires);
                    Some(Gate::toffoli(wires, target)?)
                }
                BoolOp::Or => {
                    dedup(&mut wires);
                    let r = wires.len() as u32;
                    Some(Gate::mod_q(wires, r + 1, target)?)
                }
                BoolOp::Not => Some(Gate::cnot(wires[0], target)?.negate(vec![wires[0]])?),
                BoolOp::Xor => {
                    cancel_pairs(&mut wires);
                    if wires.is_empty() {
                        None
                    } else {
                        Some(Gate::mod_q(wires, 2, target)?)
                    }
                }
            };
            gates.extend(gate);
        }
        layers.push(Layer::new(gates));
    }

    let mut b = CircuitBuilder::new(roles, LayeringDiscipline::WithFanout);
    b.layers(layers.iter().cloned());
    b.layers(layers[..d - 1].iter().rev().map(Layer::adjoint));
    Ok(b.build()?)
}

fn dedup(v: &mut Vec<QubitId>) {
    v.sort();
    v.dedup();
}

/// Removes wires that appear an even number of times.
fn cancel_pairs(v: &mut Vec<QubitId>) {
    v.sort();
    let mut out = Vec::with_capacity(v.len());
    for q in v.iter() {
        if out.last() == Some(q) {
            out.pop();
        } else {
            out.push(*q);
        }
    }
    *v = out;
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn gate(op: BoolOp, inputs: Vec<Wire>) -> BoolGate {
        BoolGate { op, inputs }
    }

    #[test]
    fn evaluator_basics() {
        use Wire::*;
        let c = ClassicalCircuit::new(
            3,
            vec![
                vec![
                    gate(BoolOp::And, vec![Input(0), Input(1)]),
                    gate(BoolOp::Or, vec![Input(1), Input(2)]),
                ],
                vec![
                    gate(
                        BoolOp::Xor,
                        vec![Gate { layer: 0, index: 0 }, Gate { layer: 0, index: 1 }],
                    ),
                    gate(BoolOp::Not, vec![Gate { layer: 0, index: 0 }]),
                ],
            ],
        )
        .unwrap();
        assert_eq!(
            (c.inputs(), c.outputs(), c.width(), c.depth()),
            (3, 2, 2, 2)
        );
        for x in 0..8 {
            let (a, b, cc) = (x & 1 == 1, x >> 1 & 1 == 1, x >> 2 & 1 == 1);
            let and = a && b;
            let or = b || cc;
            let expected = ((and ^ or) as usize) | ((!and) as usize) << 1;
            assert_eq!(c.evaluate(x), expected, "x={x:03b}");
        }
    }

    #[test]
    fn malformed_wiring_is_rejected() {
        assert_eq!(
            ClassicalCircuit::new(2, vec![]),
            Err(ClassicalError::NoLayers)
        );
        assert!(matches!(
            ClassicalCircuit::new(2, vec![vec![gate(BoolOp::And, vec![Wire::Input(2)])]]),
            Err(ClassicalError::UndefinedWire { .. })
        ));
        assert!(matches!(
            ClassicalCircuit::new(
                2,
                vec![vec![gate(
                    BoolOp::And,
                    vec![Wire::Gate { layer: 0, index: 0 }]
                )]]
            ),
            Err(ClassicalError::UndefinedWire { .. })
        ));
        assert!(matches!(
            ClassicalCircuit::new(
                2,
                vec![vec![gate(
                    BoolOp::Not,
                    vec![Wire::Input(0), Wire::Input(1)]
                )]]
            ),
            Err(ClassicalError::NotArity { .. })
        ));
        assert!(matches!(
            ClassicalCircuit::new(2, vec![vec![gate(BoolOp::Or, vec![])]]),
            Err(ClassicalError::NoInputs { .. })
        ));
    }

    #[test]
    fn single_and_is_one_toffoli() {
        let c = ClassicalCircuit::new(
            2,
            vec![vec![gate(
                BoolOp::And,
                vec![Wire::Input(0), Wire::Input(1)],
            )]],
        )
        .unwrap();
        let q = reversible_embed(&c).unwrap();
        assert_eq!(q.depth(), 1);
        assert_eq!(q.width(), 2 + 1 + 1);
        assert_eq!(q.gate_count(), 1);
        assert!(matches!(
            q.gates().next().unwrap().kind(),
            crate::ir::GateKind::Toffoli
        ));
    }

    #[test]
    fn random_circuits_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let d = rng.gen_range(1..=4);
            let c = ClassicalCircuit::random(&mut rng, n, d, 3, 4);
            c.validate().unwrap();
            assert_eq!(c.depth(), d);
            for layer in c.layers() {
                for g in layer {
                    let mut w = g.inputs.clone();
                    w.sort_by_key(|w| format!("{w:?}"));
                    w.dedup();
                    assert_eq!(w.len(), g.inputs.len(), "duplicate wire in {g:?}");
                    assert!(g.inputs.len() <= 4);
                }
            }
        }
    }

    #[test]
    fn xor_of_repeated_wire_cancels() {
        let mut v = vec![QubitId(3), QubitId(1), QubitId(3)];
        cancel_pairs(&mut v);
        assert_eq!(v, vec![QubitId(1)]);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = ClassicalCircuit::random(&mut rng, 4, 3, 3, 3);
        let s = serde_json::to_string(&c).unwrap();
        let back: ClassicalCircuit = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
