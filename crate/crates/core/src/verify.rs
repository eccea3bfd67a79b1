//! Brute-force oracles and the equivalence harness.
//!
//! An [`OracleGate`] evaluates a gate's definition directly on basis
//! indices, without going through circuit structure or the simulator.
//! [`verify_construction`] runs a circuit on every data basis input (with
//! ancillae at `|0>`) and compares complex amplitudes, phases included,
//! against the oracle's image.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind, LayeringDiscipline, QubitId, QubitRole};
use crate::matrix::Matrix;
use crate::num::ceil_log2;
use crate::simulator::{run, SimError, StateVector};
use crate::synthesis::{ClassicalCircuit, Construction, Request, SynthError, Synthesized};
use crate::C64;

/// Largest register simulated by default (2^22 amplitudes, 64 MiB).
pub const DEFAULT_SIM_CAP: usize = 22;
/// Default amplitude tolerance for a pass.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Ancilla leakage tolerance for a pass.
pub const LEAKAGE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{width}-qubit register exceeds the simulation cap of {cap}")]
    CapExceeded { width: usize, cap: usize },
    #[error("circuit width {width} is not data ({data}) plus ancillae ({ancillae})")]
    Partition {
        width: usize,
        data: usize,
        ancillae: usize,
    },
    #[error("{0} is not a basis permutation with phases")]
    NotMonomial(&'static str),
    #[error("input vector has {found} entries, expected {expected}")]
    InputLength { expected: usize, found: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

/// Definitional semantics of a gate on a local register. Indices refer to
/// bits of the oracle's own basis index.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleGate {
    Identity,
    PauliX {
        target: usize,
    },
    Hadamard {
        target: usize,
    },
    SingleQubit {
        target: usize,
        u: Matrix,
    },
    ControlledNot {
        control: usize,
        negated: bool,
        target: usize,
    },
    Toffoli {
        controls: Vec<usize>,
        negated: Vec<usize>,
        target: usize,
    },
    ControlledU {
        controls: Vec<usize>,
        negated: Vec<usize>,
        targets: Vec<usize>,
        u: Matrix,
    },
    ModQ {
        controls: Vec<usize>,
        negated: Vec<usize>,
        q: u32,
        target: usize,
    },
    Fanout {
        control: usize,
        negated: bool,
        targets: Vec<usize>,
    },
    SymmetricPhase {
        controls: Vec<usize>,
        negated: Vec<usize>,
        target: usize,
        theta: f64,
    },
    /// `|x>|y> -> |x>|y ^ f(x)>` with `x` on bits `0..inputs`.
    Reversible {
        circuit: ClassicalCircuit,
    },
}

fn bit(index: usize, q: usize) -> bool {
    index >> q & 1 == 1
}

/// Whether every control reads 1 (0 for negated controls).
fn all_fire(index: usize, controls: &[usize], negated: &[usize]) -> bool {
    controls
        .iter()
        .all(|&c| bit(index, c) != negated.contains(&c))
}

impl OracleGate {
    /// Mirror of a circuit gate, on the same qubit numbering.
    pub fn from_gate(g: &Gate) -> Self {
        let ix = |v: &[QubitId]| v.iter().map(|q| q.0).collect::<Vec<_>>();
        let (controls, negated, targets) = (ix(g.controls()), ix(g.negated()), ix(g.targets()));
        match g.kind() {
            GateKind::PauliX => OracleGate::PauliX { target: targets[0] },
            GateKind::Hadamard => OracleGate::Hadamard { target: targets[0] },
            GateKind::SingleQubitUnitary(u) => OracleGate::SingleQubit {
                target: targets[0],
                u: u.clone(),
            },
            GateKind::ControlledNot => OracleGate::ControlledNot {
                control: controls[0],
                negated: !negated.is_empty(),
                target: targets[0],
            },
            GateKind::Toffoli => OracleGate::Toffoli {
                controls,
                negated,
                target: targets[0],
            },
            GateKind::ControlledU(u) => OracleGate::ControlledU {
                controls,
                negated,
                targets,
                u: u.clone(),
            },
            GateKind::ModQ(q) => OracleGate::ModQ {
                controls,
                negated,
                q: *q,
                target: targets[0],
            },
            GateKind::Fanout => OracleGate::Fanout {
                control: controls[0],
                negated: !negated.is_empty(),
                targets,
            },
            GateKind::SymmetricPhase(theta) => OracleGate::SymmetricPhase {
                controls,
                negated,
                target: targets[0],
                theta: *theta,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleGate::Identity => "identity",
            OracleGate::PauliX { .. } => "pauli_x",
            OracleGate::Hadamard { .. } => "hadamard",
            OracleGate::SingleQubit { .. } => "single_qubit_unitary",
            OracleGate::ControlledNot { .. } => "cnot",
            OracleGate::Toffoli { .. } => "toffoli",
            OracleGate::ControlledU { .. } => "controlled_u",
            OracleGate::ModQ { .. } => "mod_q",
            OracleGate::Fanout { .. } => "fanout",
            OracleGate::SymmetricPhase { .. } => "symmetric_phase",
            OracleGate::Reversible { .. } => "reversible",
        }
    }

    pub fn is_monomial(&self) -> bool {
        !matches!(
            self,
            OracleGate::Hadamard { .. }
                | OracleGate::SingleQubit { .. }
                | OracleGate::ControlledU { .. }
        )
    }

    /// Image basis state and phase of a basis input.
    pub fn oracle_apply(&self, index: usize) -> Result<(usize, C64), VerifyError> {
        let one = C64::one();
        Ok(match self {
            OracleGate::Identity => (index, one),
            OracleGate::PauliX { target } => (index ^ 1 << target, one),
            OracleGate::ControlledNot {
                control,
                negated,
                target,
            } => {
                if bit(index, *control) != *negated {
                    (index ^ 1 << target, one)
                } else {
                    (index, one)
                }
            }
            OracleGate::Toffoli {
                controls,
                negated,
                target,
            } => {
                if all_fire(index, controls, negated) {
                    (index ^ 1 << target, one)
                } else {
                    (index, one)
                }
            }
            OracleGate::ModQ {
                controls,
                negated,
                q,
                target,
            } => {
                let count = controls
                    .iter()
                    .filter(|&&c| bit(index, c) != negated.contains(&c))
                    .count() as u32;
                if count % q != 0 {
                    (index ^ 1 << target, one)
                } else {
                    (index, one)
                }
            }
            OracleGate::Fanout {
                control,
                negated,
                targets,
            } => {
                if bit(index, *control) != *negated {
                    (targets.iter().fold(index, |i, t| i ^ 1 << t), one)
                } else {
                    (index, one)
                }
            }
            OracleGate::SymmetricPhase {
                controls,
                negated,
                target,
                theta,
            } => {
                if all_fire(index, controls, negated) && bit(index, *target) {
                    (index, Complex::from_polar(1.0, *theta))
                } else {
                    (index, one)
                }
            }
            OracleGate::Reversible { circuit } => {
                let n = circuit.inputs();
                let x = index & ((1 << n) - 1);
                (index ^ circuit.evaluate(x) << n, one)
            }
            OracleGate::Hadamard { .. }
            | OracleGate::SingleQubit { .. }
            | OracleGate::ControlledU { .. } => return Err(VerifyError::NotMonomial(self.name())),
        })
    }

    /// Column `index` of the oracle unitary, as sparse `(row, amplitude)`.
    pub fn image(&self, index: usize) -> Vec<(usize, C64)> {
        let on_block = |targets: &[usize], u: &Matrix| {
            let cleared = targets.iter().fold(index, |i, t| i & !(1 << t));
            let local = targets
                .iter()
                .enumerate()
                .fold(0, |l, (j, &t)| l | (bit(index, t) as usize) << j);
            (0..u.dim())
                .filter(|&r| !u[(r, local)].is_zero())
                .map(|r| {
                    let row = targets
                        .iter()
                        .enumerate()
                        .fold(cleared, |i, (j, &t)| i | (r >> j & 1) << t);
                    (row, u[(r, local)])
                })
                .collect()
        };
        match self {
            OracleGate::Hadamard { target } => on_block(&[*target], &Matrix::hadamard()),
            OracleGate::SingleQubit { target, u } => on_block(&[*target], u),
            OracleGate::ControlledU {
                controls,
                negated,
                targets,
                u,
            } => {
                if all_fire(index, controls, negated) {
                    on_block(targets, u)
                } else {
                    vec![(index, C64::one())]
                }
            }
            _ => vec![self.oracle_apply(index).expect("monomial oracle")],
        }
    }

    /// Dense oracle matrix on `width` qubits.
    pub fn matrix(&self, width: usize) -> Matrix {
        let mut m = Matrix::zeros(1 << width);
        for j in 0..1 << width {
            for (r, a) in self.image(j) {
                m[(r, j)] += a;
            }
        }
        m
    }

    /// MOD_q on inputs `0..n` with target `n`.
    pub fn mod_q(n: usize, q: u32) -> Self {
        OracleGate::ModQ {
            controls: (0..n).collect(),
            negated: vec![],
            q,
            target: n,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerificationReport {
    pub construction: String,
    pub n: usize,
    pub q: Option<usize>,
    pub discipline: &'static str,
    /// Largest amplitude error over all checked inputs; `None` when only
    /// structure was checked.
    pub max_error: Option<f64>,
    pub max_leakage: Option<f64>,
    pub inputs_checked: usize,
    pub depth: usize,
    pub width: usize,
    pub ancillae: usize,
    pub copy_ancillae: Option<usize>,
    pub work_qubits: usize,
    pub amplitudes_checked: bool,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn structural(circuit: &Circuit, tolerance: f64) -> Self {
        Self {
            construction: "custom".into(),
            n: circuit.with_role(QubitRole::Input).len(),
            q: None,
            discipline: circuit.discipline().name(),
            max_error: None,
            max_leakage: None,
            inputs_checked: 0,
            depth: circuit.depth(),
            width: circuit.width(),
            ancillae: circuit.ancilla_count(),
            copy_ancillae: None,
            work_qubits: 0,
            amplitudes_checked: false,
            tolerance,
            pass: false,
        }
    }

    fn absorb(&mut self, error: f64, leakage: f64) {
        self.max_error = Some(self.max_error.unwrap_or(0.0).max(error));
        self.max_leakage = Some(self.max_leakage.unwrap_or(0.0).max(leakage));
        self.inputs_checked += 1;
        self.amplitudes_checked = true;
        self.pass =
            self.max_error.unwrap() <= self.tolerance && self.max_leakage.unwrap() <= LEAKAGE_TOL;
    }

    fn label(&mut self, s: &Synthesized) {
        self.construction = s.request.construction.name().into();
        self.n = s.request.n;
        self.q = s
            .request
            .q
            .filter(|_| s.request.construction.uses_modulus());
        self.copy_ancillae = s.copy_ancillae;
        self.work_qubits = s.work_qubits;
    }

    /// Human-readable multi-line summary.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let verdict = if !self.amplitudes_checked {
            "STRUCTURAL"
        } else if self.pass {
            "PASS"
        } else {
            "FAIL"
        };
        writeln!(
            out,
            "{verdict} {} n={}{}",
            self.construction,
            self.n,
            self.q.map(|q| format!(" q={q}")).unwrap_or_default()
        )
        .unwrap();
        writeln!(
            out,
            "  discipline={} depth={} width={} ancillae={} work={}",
            self.discipline,
            self.depth,
            self.width,
            self.copy_ancillae.unwrap_or(self.ancillae),
            self.work_qubits
        )
        .unwrap();
        match (self.max_error, self.max_leakage) {
            (Some(e), Some(l)) => writeln!(
                out,
                "  max_error={e:e} max_leakage={l:e} inputs={} tolerance={:e}",
                self.inputs_checked, self.tolerance
            )
            .unwrap(),
            _ => writeln!(out, "  amplitude checks skipped").unwrap(),
        }
        out
    }
}

/// Places local data index `d` onto the circuit register.
fn scatter(d: usize, data: &[QubitId]) -> usize {
    data.iter()
        .enumerate()
        .fold(0, |acc, (j, q)| acc | (d >> j & 1) << q.0)
}

fn gather(i: usize, data: &[QubitId]) -> usize {
    data.iter()
        .enumerate()
        .fold(0, |acc, (j, q)| acc | (i >> q.0 & 1) << j)
}

/// Settings for one verification run.
#[derive(Debug, Clone)]
pub struct Harness<'a> {
    pub circuit: &'a Circuit,
    pub oracle: &'a OracleGate,
    /// Oracle bit `j` lives on circuit qubit `data[j]`.
    pub data: Vec<QubitId>,
    pub ancillae: Vec<QubitId>,
    /// Local data bits enumerated; the rest start at 0. `None` means all.
    pub free: Option<Vec<usize>>,
    pub tolerance: f64,
    pub cap: usize,
}

impl<'a> Harness<'a> {
    pub fn new(
        circuit: &'a Circuit,
        oracle: &'a OracleGate,
        data: Vec<QubitId>,
        ancillae: Vec<QubitId>,
    ) -> Self {
        Self {
            circuit,
            oracle,
            data,
            ancillae,
            free: None,
            tolerance: DEFAULT_TOL,
            cap: DEFAULT_SIM_CAP,
        }
    }

    fn check(&self) -> Result<(), VerifyError> {
        let w = self.circuit.width();
        if self.data.len() + self.ancillae.len() != w {
            return Err(VerifyError::Partition {
                width: w,
                data: self.data.len(),
                ancillae: self.ancillae.len(),
            });
        }
        if w > self.cap {
            return Err(VerifyError::CapExceeded {
                width: w,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn inputs(&self) -> Vec<usize> {
        match &self.free {
            None => (0..1 << self.data.len()).collect(),
            Some(bits) => (0..1usize << bits.len())
                .map(|s| {
                    bits.iter()
                        .enumerate()
                        .fold(0, |acc, (j, b)| acc | (s >> j & 1) << b)
                })
                .collect(),
        }
    }

    /// Compares a circuit output against an expected data-register vector
    /// (sparse) and measures ancilla leakage.
    fn compare(&self, out: &StateVector, expected: &[(usize, C64)]) -> (f64, f64) {
        let anc = self.ancillae.iter().fold(0usize, |m, q| m | 1 << q.0);
        let mut leakage = 0.0;
        let mut error: f64 = 0.0;
        let mut dense = vec![C64::zero(); 1 << self.data.len()];
        for &(r, a) in expected {
            dense[r] += a;
        }
        for (i, a) in out.amplitudes().iter().enumerate() {
            if i & anc != 0 {
                leakage += a.norm_sqr();
            } else {
                error = error.max((a - dense[gather(i, &self.data)]).norm());
            }
        }
        (error, leakage)
    }

    /// Checks every enumerated data basis input.
    pub fn run(&self) -> Result<VerificationReport, VerifyError> {
        self.check()?;
        let mut report = VerificationReport::structural(self.circuit, self.tolerance);
        let w = self.circuit.width();
        for d in self.inputs() {
            let out = run(
                self.circuit,
                StateVector::<f64>::basis(w, scatter(d, &self.data)),
            )?;
            let (error, leakage) = self.compare(&out, &self.oracle.image(d));
            report.absorb(error, leakage);
        }
        Ok(report)
    }

    /// Runs one data-register superposition (ancillae at `|0>`) and returns
    /// the l2 distance to the oracle's image together with the leakage.
    pub fn superposition(&self, input: &[C64]) -> Result<(f64, f64), VerifyError> {
        self.check()?;
        let dim = 1 << self.data.len();
        if input.len() != dim {
            return Err(VerifyError::InputLength {
                expected: dim,
                found: input.len(),
            });
        }
        let w = self.circuit.width();
        let mut amps = vec![C64::zero(); 1 << w];
        let mut expected = vec![C64::zero(); dim];
        for (d, a) in input.iter().enumerate() {
            amps[scatter(d, &self.data)] = *a;
            for (r, z) in self.oracle.image(d) {
                expected[r] += a * z;
            }
        }
        let out = run(self.circuit, StateVector::from_amplitudes(amps)?)?;
        let anc = self.ancillae.iter().fold(0usize, |m, q| m | 1 << q.0);
        let mut leakage = 0.0;
        let mut err2 = 0.0;
        for (i, a) in out.amplitudes().iter().enumerate() {
            if i & anc != 0 {
                leakage += a.norm_sqr();
                err2 += a.norm_sqr();
            } else {
                err2 += (a - expected[gather(i, &self.data)]).norm_sqr();
            }
        }
        Ok((err2.sqrt(), leakage))
    }
}

/// Runs `circuit` on every data basis input and compares with `oracle`.
pub fn verify_construction(
    circuit: &Circuit,
    oracle: &OracleGate,
    data_qubits: &[QubitId],
    ancillae: &[QubitId],
) -> Result<VerificationReport, VerifyError> {
    Harness::new(circuit, oracle, data_qubits.to_vec(), ancillae.to_vec()).run()
}

/// Oracle, data qubits and ancillae for a synthesized construction.
pub fn harness_for<'a>(s: &'a Synthesized, oracle: &'a OracleGate) -> Harness<'a> {
    let c = &s.circuit;
    let mut h = match s.request.construction {
        // Cat preparation is only specified on |x>|0...0>.
        Construction::Cat => {
            let mut h = Harness::new(c, oracle, (0..c.width()).map(QubitId).collect(), vec![]);
            h.free = Some(vec![0]);
            h
        }
        Construction::Fanout => {
            Harness::new(c, oracle, (0..c.width()).map(QubitId).collect(), vec![])
        }
        _ => Harness::new(c, oracle, c.data_qubits(), c.with_role(QubitRole::Ancilla)),
    };
    h.tolerance = DEFAULT_TOL;
    h
}

/// Oracle matching a request's intended gate.
pub fn oracle_for(s: &Synthesized) -> OracleGate {
    let r = &s.request;
    let n = r.n;
    match r.construction {
        Construction::Cat if n == 1 => OracleGate::Identity,
        Construction::Cat => OracleGate::Fanout {
            control: 0,
            negated: false,
            targets: (1..n).collect(),
        },
        Construction::Fanout => OracleGate::Fanout {
            control: 0,
            negated: false,
            targets: (1..=n).collect(),
        },
        Construction::ParityFanout | Construction::ParityCat => OracleGate::mod_q(n, 2),
        Construction::ModqSeq | Construction::ModqConst => {
            OracleGate::mod_q(n, r.q.unwrap_or(2) as u32)
        }
        Construction::CtrlU => OracleGate::ControlledU {
            controls: (0..n).collect(),
            negated: vec![],
            targets: vec![n],
            u: Matrix::phase_gate(r.theta),
        },
        Construction::RevEmbed => OracleGate::Reversible {
            circuit: r
                .classical
                .clone()
                .expect("rev-embed request carries its circuit"),
        },
    }
}

/// Synthesizes and verifies a request; see [`verify_synthesized`].
pub fn verify_request(
    request: &Request,
    tolerance: f64,
    cap: usize,
    structural_only: bool,
) -> Result<VerificationReport, VerifyError> {
    verify_synthesized(&request.synthesize()?, tolerance, cap, structural_only)
}

/// Checks a built circuit against the oracle of its request. With
/// `structural_only` the amplitudes are not simulated and the report only
/// carries depth, width and ancilla counts.
pub fn verify_synthesized(
    s: &Synthesized,
    tolerance: f64,
    cap: usize,
    structural_only: bool,
) -> Result<VerificationReport, VerifyError> {
    let mut report = if structural_only {
        VerificationReport::structural(&s.circuit, tolerance)
    } else {
        let oracle = oracle_for(s);
        let mut h = harness_for(s, &oracle);
        h.tolerance = tolerance;
        h.cap = cap;
        h.run()?
    };
    report.label(s);
    Ok(report)
}

/// How depth scales with `n`, decided by exact integer comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Constant,
    /// `depth = a + b * ceil(log2 n)` with `b > 0`.
    Logarithmic,
    /// `depth = a + b * n` with `b > 0`.
    Linear,
    /// Strictly increasing but neither of the above.
    Increasing,
    Other,
}

impl Growth {
    pub fn name(self) -> &'static str {
        match self {
            Growth::Constant => "constant",
            Growth::Logarithmic => "logarithmic",
            Growth::Linear => "linear",
            Growth::Increasing => "increasing",
            Growth::Other => "other",
        }
    }

    pub fn classify(rows: &[(usize, usize)]) -> Growth {
        let Some(&(_, d0)) = rows.first() else {
            return Growth::Constant;
        };
        if rows.iter().all(|&(_, d)| d == d0) {
            return Growth::Constant;
        }
        let fits = |x: &dyn Fn(usize) -> i64| {
            let (n0, d0) = rows[0];
            let Some(&(n1, d1)) = rows.iter().find(|(n, _)| x(*n) != x(n0)) else {
                return false;
            };
            let dx = x(n1) - x(n0);
            let dd = d1 as i64 - d0 as i64;
            if dd <= 0 || dd % dx != 0 {
                return false;
            }
            let b = dd / dx;
            let a = d0 as i64 - b * x(n0);
            rows.iter().all(|&(n, d)| d as i64 == a + b * x(n))
        };
        if fits(&|n| ceil_log2(n) as i64) {
            Growth::Logarithmic
        } else if fits(&|n| n as i64) {
            Growth::Linear
        } else if rows.windows(2).all(|w| w[1].1 > w[0].1) {
            Growth::Increasing
        } else {
            Growth::Other
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub depth: usize,
    pub width: usize,
    pub ancillae: usize,
    /// Result of an amplitude check, when one was requested and fit under
    /// the cap.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScalingTable {
    pub construction: String,
    pub q: Option<usize>,
    pub discipline: &'static str,
    pub rows: Vec<ScalingRow>,
    pub growth: Growth,
}

impl ScalingTable {
    /// Tab-separated `n depth width ancillae` with a header line.
    pub fn tsv(&self) -> String {
        let mut out = String::from("n\tdepth\twidth\tancillae\n");
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}\t{}", r.n, r.depth, r.width, r.ancillae).unwrap();
        }
        out
    }

    pub fn depths(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.depth).collect()
    }
}

/// Depth, width and ancillae of `template` rebuilt for every `n` in range.
/// With `verify_cap`, rows whose register fits under the cap are also
/// checked against the oracle.
pub fn depth_scaling_table(
    template: &Request,
    n_range: std::ops::RangeInclusive<usize>,
    verify_cap: Option<usize>,
) -> Result<ScalingTable, VerifyError> {
    let mut rows = Vec::new();
    for n in n_range {
        let mut r = template.clone();
        r.n = n;
        let s = r.synthesize()?;
        let verified = match verify_cap {
            Some(cap) if s.circuit.width() <= cap => {
                let oracle = oracle_for(&s);
                let mut h = harness_for(&s, &oracle);
                h.cap = cap;
                Some(h.run()?.pass)
            }
            _ => None,
        };
        rows.push(ScalingRow {
            n,
            depth: s.circuit.depth(),
            width: s.circuit.width(),
            ancillae: s.reported_ancillae(),
            verified,
        });
    }
    let growth = Growth::classify(&rows.iter().map(|r| (r.n, r.depth)).collect::<Vec<_>>());
    Ok(ScalingTable {
        construction: template.construction.name().into(),
        q: template.q.filter(|_| template.construction.uses_modulus()),
        discipline: template.discipline.name(),
        rows,
        growth,
    })
}

/// Circuit-level identities checked by `identities`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdentityResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Hadamard-conjugated CNOT against the pi phase shift, and the
/// Hadamard-conjugated fanout against MOD_2 for `n = 1..=4`.
pub fn identity_suite() -> Result<Vec<IdentityResult>, VerifyError> {
    use crate::ir::Layer;
    use crate::simulator::unitary_of;
    use crate::synthesis::parity_from_fanout;

    const TOL: f64 = 1e-12;
    let roles = vec![QubitRole::Input, QubitRole::Target];
    let hcx = Circuit::new(
        roles.clone(),
        LayeringDiscipline::Strict,
        vec![
            Layer::new(vec![Gate::hadamard(1)]),
            Layer::new(vec![Gate::cnot(0, 1).map_err(SynthError::from)?]),
            Layer::new(vec![Gate::hadamard(1)]),
        ],
    )
    .map_err(SynthError::from)?;
    let pi_shift = OracleGate::SymmetricPhase {
        controls: vec![0],
        negated: vec![],
        target: 1,
        theta: std::f64::consts::PI,
    };
    let e1 = unitary_of::<f64>(&hcx)?.max_abs_diff(&pi_shift.matrix(2));

    let mut e2: f64 = 0.0;
    for n in 1..=4 {
        let u = unitary_of::<f64>(&parity_from_fanout(n)?)?;
        e2 = e2.max(u.max_abs_diff(&OracleGate::mod_q(n, 2).matrix(n + 1)));
    }
    Ok(vec![
        IdentityResult {
            name: "hadamard-conjugated cnot = controlled pi-shift",
            max_error: e1,
            tolerance: TOL,
            pass: e1 <= TOL,
        },
        IdentityResult {
            name: "hadamard-conjugated fanout = parity (n=1..4)",
            max_error: e2,
            tolerance: TOL,
            pass: e2 <= TOL,
        },
    ])
}
