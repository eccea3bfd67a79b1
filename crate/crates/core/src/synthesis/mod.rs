//! Circuit constructions: cat states and fanout, parity in both
//! directions, constant-depth n-ary controlled-U, MOD_q gates and the
//! reversible embedding of layered Boolean circuits.
//!
//! Unless stated otherwise, a construction on `n` inputs places the inputs
//! on qubits `0..n`, its target on qubit `n` and ancillae above that.

mod classical;
mod modq;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use classical::{reversible_embed, BoolGate, BoolOp, ClassicalCircuit, ClassicalError, Wire};
pub use modq::{modq_constant_depth, modq_plan, modq_sequential, ModQLayout, ModQPlan};

use crate::ir::{
    qubits, Circuit, CircuitBuilder, CircuitError, Gate, Layer, LayeringDiscipline, QubitId,
    QubitRole,
};
use crate::matrix::Matrix;
use crate::num::ceil_log2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("construction needs at least one input")]
    Empty,
    #[error("modulus must be at least 2, got {0}")]
    Modulus(usize),
    #[error("cat-state builder has width {found}, expected {expected}")]
    BuilderWidth { expected: usize, found: usize },
    #[error("ancilla {0} overlaps the controls or target")]
    AncillaOverlap(QubitId),
    #[error("{construction} needs the {needed} discipline")]
    Discipline {
        construction: Construction,
        needed: &'static str,
    },
    #[error("{construction} requires --{param}")]
    MissingParameter {
        construction: Construction,
        param: &'static str,
    },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Copies qubit 0 onto qubits `1..n` with a doubling CNOT cascade of
/// depth `ceil(log2 n)`: in round `r` each of the first `2^r` qubits
/// writes to a fresh one.
pub fn cat_log_depth(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let mut roles = vec![QubitRole::Ancilla; n];
    roles[0] = QubitRole::Input;
    let mut b = CircuitBuilder::new(roles, LayeringDiscipline::Strict);
    let mut written = 1;
    while written < n {
        let layer = (0..written)
            .filter(|i| written + i < n)
            .map(|i| Gate::cnot(i, written + i))
            .collect::<Result<Vec<_>, _>>()?;
        b.layer(layer);
        written *= 2;
    }
    Ok(b.build()?)
}

/// One fanout gate from qubit 0 onto qubits `1..=n`.
pub fn fanout_gate(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let mut roles = vec![QubitRole::Target; n + 1];
    roles[0] = QubitRole::Input;
    let g = Gate::fanout(0, qubits(1..=n))?;
    Ok(Circuit::new(
        roles,
        LayeringDiscipline::WithFanout,
        vec![vec![g].into()],
    )?)
}

fn hadamard_layer(qs: impl IntoIterator<Item = usize>) -> Layer {
    Layer::new(qs.into_iter().map(Gate::hadamard).collect())
}

fn parity_roles(n: usize) -> Vec<QubitRole> {
    let mut roles = vec![QubitRole::Input; n + 1];
    roles[n] = QubitRole::Target;
    roles
}

/// MOD_2 on inputs `0..n` and target `n`: a fanout from the target onto the
/// inputs, conjugated by Hadamards on every qubit. Depth 3, no ancillae.
pub fn parity_from_fanout(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let fan = Gate::fanout(n, qubits(0..n))?;
    Ok(Circuit::new(
        parity_roles(n),
        LayeringDiscipline::WithFanout,
        vec![
            hadamard_layer(0..=n),
            vec![fan].into(),
            hadamard_layer(0..=n),
        ],
    )?)
}

/// Fanout from qubit 0 onto `1..=n`: a MOD_2 gate from the `n` targets onto
/// qubit 0, conjugated by Hadamards on every qubit. Depth 3.
pub fn fanout_from_parity(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let mut roles = vec![QubitRole::Target; n + 1];
    roles[0] = QubitRole::Input;
    let parity = Gate::mod_q(qubits(1..=n), 2, 0)?;
    Ok(Circuit::new(
        roles,
        LayeringDiscipline::Strict,
        vec![
            hadamard_layer(0..=n),
            vec![parity].into(),
            hadamard_layer(0..=n),
        ],
    )?)
}

/// Ways of preparing a cat state from qubit 0 of a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CatBuilder {
    #[default]
    Fanout,
    LogDepth,
}

impl CatBuilder {
    /// A circuit on `width` qubits mapping `|x>|0...0>` to `|x...x>`.
    pub fn circuit(self, width: usize) -> Result<Circuit, SynthError> {
        match self {
            CatBuilder::LogDepth => cat_log_depth(width),
            CatBuilder::Fanout if width <= 1 => cat_log_depth(width),
            CatBuilder::Fanout => fanout_gate(width - 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CatBuilder::Fanout => "fanout",
            CatBuilder::LogDepth => "log-cat",
        }
    }
}

impl FromStr for CatBuilder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fanout" => Ok(CatBuilder::Fanout),
            "log-cat" | "log" => Ok(CatBuilder::LogDepth),
            other => Err(format!(
                "unknown cat builder '{other}' (expected fanout or log-cat)"
            )),
        }
    }
}

/// MOD_2 on inputs `0..n` and target `n` from controlled pi-shifts.
///
/// The target is rotated by H, copied onto ancillae `n+1..2n` by `cat`
/// (which must map `|x>|0...0>` to `|x...x>` on `n` qubits), each input
/// applies a pi phase to its own copy in one layer, the copy is undone and
/// the target rotated back. Depth `2 * depth(cat) + 3`, `n - 1` ancillae.
pub fn parity_via_catstate(n: usize, cat: &Circuit) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    if cat.width() != n {
        return Err(SynthError::BuilderWidth {
            expected: n,
            found: cat.width(),
        });
    }
    let mut roles = parity_roles(n);
    roles.extend(std::iter::repeat(QubitRole::Ancilla).take(n - 1));
    let copies: Vec<QubitId> = std::iter::once(QubitId(n))
        .chain(qubits(n + 1..2 * n))
        .collect();

    let phases = (0..n)
        .map(|i| Gate::symmetric_phase(vec![QubitId(i)], copies[i], PI))
        .collect::<Result<Vec<_>, _>>()?;
    let mut b = CircuitBuilder::new(roles, cat.discipline());
    b.layer(vec![Gate::hadamard(n)]);
    b.append_mapped(cat, &copies);
    b.layer(phases);
    b.append_mapped(&cat.inverse(), &copies);
    b.layer(vec![Gate::hadamard(n)]);
    Ok(b.build()?)
}

/// n-ary controlled-U in depth 3 with one ancilla: a Toffoli from the
/// controls onto the ancilla, a two-qubit controlled-U from the ancilla
/// onto the target, and the Toffoli again. Qubits not named are inputs.
pub fn controlled_u_constant_depth(
    width: usize,
    controls: &[QubitId],
    u: &Matrix,
    target: QubitId,
    ancilla: QubitId,
) -> Result<Circuit, SynthError> {
    if controls.is_empty() {
        return Err(SynthError::Empty);
    }
    if controls.contains(&ancilla) || ancilla == target {
        return Err(SynthError::AncillaOverlap(ancilla));
    }
    let mut roles = vec![QubitRole::Input; width];
    for q in [target, ancilla] {
        if q.0 >= width {
            return Err(CircuitError::QubitOutOfRange { qubit: q, width }.into());
        }
    }
    roles[target.0] = QubitRole::Target;
    roles[ancilla.0] = QubitRole::Ancilla;
    let compute = Gate::toffoli(controls.to_vec(), ancilla)?;
    let cu = Gate::controlled_u(vec![ancilla], vec![target], u.clone())?;
    Ok(Circuit::new(
        roles,
        LayeringDiscipline::Strict,
        vec![
            vec![compute.clone()].into(),
            vec![cu].into(),
            vec![compute].into(),
        ],
    )?)
}

/// [`controlled_u_constant_depth`] with controls `0..n`, target `n` and
/// ancilla `n + 1`.
pub fn controlled_u(n: usize, u: &Matrix) -> Result<Circuit, SynthError> {
    controlled_u_constant_depth(n + 2, &qubits(0..n), u, QubitId(n), QubitId(n + 1))
}

/// Named constructions, as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    Cat,
    Fanout,
    ParityFanout,
    ParityCat,
    ModqSeq,
    ModqConst,
    CtrlU,
    RevEmbed,
}

impl Construction {
    pub const ALL: [Construction; 8] = [
        Construction::Cat,
        Construction::Fanout,
        Construction::ParityFanout,
        Construction::ParityCat,
        Construction::ModqSeq,
        Construction::ModqConst,
        Construction::CtrlU,
        Construction::RevEmbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Cat => "cat",
            Construction::Fanout => "fanout",
            Construction::ParityFanout => "parity-fanout",
            Construction::ParityCat => "parity-cat",
            Construction::ModqSeq => "modq-seq",
            Construction::ModqConst => "modq-const",
            Construction::CtrlU => "ctrl-u",
            Construction::RevEmbed => "rev-embed",
        }
    }

    pub fn uses_modulus(self) -> bool {
        matches!(self, Construction::ModqSeq | Construction::ModqConst)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown construction '{s}'"))
    }
}

/// Everything needed to build one construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub construction: Construction,
    pub n: usize,
    pub q: Option<usize>,
    pub discipline: LayeringDiscipline,
    pub builder: CatBuilder,
    /// Phase of the `diag(1, e^{i theta})` target unitary for `ctrl-u`.
    pub theta: f64,
    /// Boolean circuit for `rev-embed`.
    pub classical: Option<ClassicalCircuit>,
}

impl Request {
    pub fn new(construction: Construction, n: usize) -> Self {
        Self {
            construction,
            n,
            q: None,
            discipline: LayeringDiscipline::WithFanout,
            builder: CatBuilder::Fanout,
            theta: PI,
            classical: None,
        }
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_discipline(mut self, d: LayeringDiscipline) -> Self {
        self.discipline = d;
        self
    }

    pub fn with_builder(mut self, b: CatBuilder) -> Self {
        self.builder = b;
        self
    }

    pub fn with_classical(mut self, c: ClassicalCircuit) -> Self {
        self.classical = Some(c);
        self
    }

    fn modulus(&self) -> Result<usize, SynthError> {
        self.q.ok_or(SynthError::MissingParameter {
            construction: self.construction,
            param: "q",
        })
    }

    /// Builds the circuit. Constructions with a native discipline other
    /// than the requested one are relabelled when valid under it.
    pub fn synthesize(&self) -> Result<Synthesized, SynthError> {
        use Construction::*;
        let n = self.n;
        let mut copy_ancillae = None;
        let mut work_qubits = 0;
        let circuit = match self.construction {
            Cat => cat_log_depth(n)?,
            Fanout => fanout_gate(n)?,
            ParityFanout => parity_from_fanout(n)?,
            ParityCat => parity_via_catstate(n, &self.builder.circuit(n)?)?,
            ModqSeq => {
                let c = modq_sequential(n, self.modulus()?)?;
                work_qubits = c.ancilla_count();
                c
            }
            ModqConst => {
                let q = self.modulus()?;
                let c = modq_constant_depth(n, q, self.discipline)?;
                let lay = ModQLayout::new(n, q, true);
                copy_ancillae = Some(lay.copy_ancillae());
                work_qubits = ceil_log2(q);
                c
            }
            CtrlU => controlled_u(n, &Matrix::phase_gate(self.theta))?,
            RevEmbed => {
                let c = self
                    .classical
                    .as_ref()
                    .ok_or(SynthError::MissingParameter {
                        construction: RevEmbed,
                        param: "classical",
                    })?;
                reversible_embed(c)?
            }
        };
        let circuit = match (circuit.discipline(), self.discipline) {
            (a, b) if a == b => circuit,
            (LayeringDiscipline::Strict, LayeringDiscipline::WithFanout) => {
                circuit.with_discipline(LayeringDiscipline::WithFanout)?
            }
            _ => {
                return Err(SynthError::Discipline {
                    construction: self.construction,
                    needed: "wf",
                })
            }
        };
        Ok(Synthesized {
            request: self.clone(),
            circuit,
            copy_ancillae,
            work_qubits,
        })
    }
}

/// A built circuit with the ancilla ledger of its construction.
#[derive(Debug, Clone)]
pub struct Synthesized {
    pub request: Request,
    pub circuit: Circuit,
    /// Copy ancillae of the constant-depth MOD_q construction (`n * k`).
    pub copy_ancillae: Option<usize>,
    /// Work qubits listed apart from the promised ancillae (the `k`-qubit
    /// counter for MOD_q).
    pub work_qubits: usize,
}

impl Synthesized {
    /// Ancillae as reported in summaries: the promised copy ancillae for
    /// the constant-depth MOD_q circuit, every ancilla otherwise.
    pub fn reported_ancillae(&self) -> usize {
        self.copy_ancillae
            .unwrap_or_else(|| self.circuit.ancilla_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{run, unitary_of, StateVector};

    #[test]
    fn cat_depths() {
        assert_eq!(cat_log_depth(1).unwrap().depth(), 0);
        assert_eq!(cat_log_depth(4).unwrap().depth(), 2);
        assert_eq!(cat_log_depth(5).unwrap().depth(), 3);
        assert!(matches!(cat_log_depth(0), Err(SynthError::Empty)));
        for n in 1..40 {
            assert_eq!(cat_log_depth(n).unwrap().depth(), ceil_log2(n));
        }
    }

    #[test]
    fn cat_of_one_is_all_ones() {
        let c = cat_log_depth(5).unwrap();
        let out = run(&c, StateVector::<f64>::basis(5, 1)).unwrap();
        assert_eq!(out.amplitude(0b11111).re, 1.0);
    }

    #[test]
    fn fanout_gate_actions() {
        let c = fanout_gate(3).unwrap();
        assert_eq!(c.depth(), 1);
        let out = run(&c, StateVector::<f64>::basis(4, 0b0001)).unwrap();
        assert_eq!(out.amplitude(0b1111).re, 1.0);
        let out = run(&c, StateVector::<f64>::basis(4, 0b0110)).unwrap();
        assert_eq!(out.amplitude(0b0110).re, 1.0);
        assert!(fanout_gate(0).is_err());
    }

    #[test]
    fn fanout_of_two_is_two_cnots() {
        let u: Matrix = unitary_of(&fanout_gate(2).unwrap()).unwrap();
        let cx1: Matrix = Matrix::permutation(8, |j| if j & 1 == 1 { j ^ 0b010 } else { j });
        let cx2: Matrix = Matrix::permutation(8, |j| if j & 1 == 1 { j ^ 0b100 } else { j });
        assert_eq!(u.max_abs_diff(&cx1.matmul(&cx2)), 0.0);
    }

    #[test]
    fn parity_of_one_input_is_cnot() {
        let u: Matrix = unitary_of(&parity_from_fanout(1).unwrap()).unwrap();
        let cx: Matrix = Matrix::permutation(4, |j| if j & 1 == 1 { j ^ 2 } else { j });
        assert!(u.max_abs_diff(&cx) < 1e-15);
        let via_cat = parity_via_catstate(1, &cat_log_depth(1).unwrap()).unwrap();
        assert_eq!(via_cat.depth(), 3);
        let u: Matrix = unitary_of(&via_cat).unwrap();
        assert!(u.max_abs_diff(&cx) < 1e-15);
    }

    #[test]
    fn parity_via_cat_resources() {
        for n in 1..=6 {
            for b in [CatBuilder::Fanout, CatBuilder::LogDepth] {
                let cat = b.circuit(n).unwrap();
                let c = parity_via_catstate(n, &cat).unwrap();
                assert_eq!(c.ancilla_count(), n - 1);
                assert_eq!(c.depth(), 2 * cat.depth() + 3);
            }
        }
        assert!(matches!(
            parity_via_catstate(3, &cat_log_depth(4).unwrap()),
            Err(SynthError::BuilderWidth {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn controlled_u_rejects_overlap() {
        let x = Matrix::pauli_x();
        assert!(matches!(
            controlled_u_constant_depth(4, &qubits([0, 1]), &x, QubitId(2), QubitId(1)),
            Err(SynthError::AncillaOverlap(QubitId(1)))
        ));
        assert!(matches!(
            controlled_u_constant_depth(4, &qubits([0, 1]), &x, QubitId(2), QubitId(2)),
            Err(SynthError::AncillaOverlap(QubitId(2)))
        ));
        let c = controlled_u(2, &x).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.ancilla_count(), 1);
    }

    #[test]
    fn controlled_u_applies_u_when_all_controls_set() {
        let h = Matrix::hadamard();
        let c = controlled_u(3, &h).unwrap();
        let out = run(&c, StateVector::<f64>::basis(5, 0b00111)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(0b00111).re - s).abs() < 1e-15);
        assert!((out.amplitude(0b01111).re - s).abs() < 1e-15);
    }

    #[test]
    fn request_dispatch_and_errors() {
        let s = Request::new(Construction::ModqConst, 4)
            .with_q(3)
            .synthesize()
            .unwrap();
        assert_eq!(s.copy_ancillae, Some(8));
        assert_eq!(s.work_qubits, 2);
        assert_eq!(s.reported_ancillae(), 8);
        assert!(matches!(
            Request::new(Construction::ModqSeq, 4).synthesize(),
            Err(SynthError::MissingParameter { param: "q", .. })
        ));
        assert!(matches!(
            Request::new(Construction::Fanout, 4)
                .with_discipline(LayeringDiscipline::Strict)
                .synthesize(),
            Err(SynthError::Discipline { .. })
        ));
        let cat = Request::new(Construction::Cat, 1).synthesize().unwrap();
        assert_eq!(cat.circuit.depth(), 0);
        for c in Construction::ALL {
            assert_eq!(c.name().parse::<Construction>(), Ok(c));
        }
        assert!("bogus".parse::<Construction>().is_err());
    }
}
