//! Dense state-vector simulation.
//!
//! Basis ordering is little-endian: qubit `i` is bit `i` of the basis
//! index, so a `k`-qubit block `x_{k-1} ... x_1 x_0` stores `x_0` on the
//! block's first qubit.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind, QubitId};
use crate::matrix::Matrix;
use crate::num::{cast, phase, Real};

/// Largest register [`unitary_of`] builds a full matrix for.
pub const DEFAULT_UNITARY_CAP: usize = 12;

/// Probability mass on ancilla-dirty basis states still counted as pure.
pub const PURITY_TOL: f64 = 1e-10;

/// Amplitudes below this modulus are left out of [`StateVector::dump`].
pub const DUMP_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qubit {qubit} is outside a {width}-qubit state")]
    QubitOutOfRange { qubit: QubitId, width: usize },
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { circuit: usize, state: usize },
    #[error("{width} qubits exceeds the cap of {cap}")]
    TooWide { width: usize, cap: usize },
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real = f64> {
    width: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>` on `width` qubits.
    pub fn zero(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        assert!(index < 1 << width, "basis index out of range");
        let mut amps = vec![Complex::zero(); 1 << width];
        amps[index] = Complex::one();
        Self { width, amps }
    }

    /// Wraps raw amplitudes; the vector must have unit norm within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self, SimError> {
        let n = amps.len();
        if !n.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(n));
        }
        let s = Self {
            width: n.trailing_zeros() as usize,
            amps,
        };
        let norm = s.norm().to_f64();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    /// `(|0> + |1>)/sqrt(2)` on qubit `q`, every other qubit `|0>`.
    pub fn plus(width: usize, q: usize) -> Self {
        assert!(q < width);
        let mut s = Self::zero(width);
        let h = T::FRAC_1_SQRT_2();
        s.amps[0] = Complex::new(h, T::zero());
        s.amps[1 << q] = Complex::new(h, T::zero());
        s
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    /// Euclidean distance between two states of equal width.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.width, other.width);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        if let Some(q) = gate.max_qubit().filter(|q| q.0 >= self.width) {
            return Err(SimError::QubitOutOfRange {
                qubit: q,
                width: self.width,
            });
        }
        let (cmask, want) = gate.control_pattern();
        let fires = move |i: usize| i & cmask == want;
        match gate.kind() {
            GateKind::PauliX => self.flip_where(gate.target_mask(), |_| true),
            GateKind::ControlledNot | GateKind::Toffoli | GateKind::Fanout => {
                self.flip_where(gate.target_mask(), fires)
            }
            GateKind::ModQ(q) => {
                let neg = gate.negation_mask();
                let q = *q;
                self.flip_where(gate.target_mask(), move |i| {
                    ((i ^ neg) & cmask).count_ones() % q != 0
                })
            }
            GateKind::SymmetricPhase(theta) => {
                let t = gate.target_mask();
                let z = phase(T::from_f64(*theta));
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if fires(i) && i & t != 0 {
                        *a *= z;
                    }
                }
            }
            GateKind::Hadamard => self.apply_block(gate.targets(), &Matrix::hadamard(), |_| true),
            GateKind::SingleQubitUnitary(u) => self.apply_block(gate.targets(), u, |_| true),
            GateKind::ControlledU(u) => self.apply_block(gate.targets(), u, fires),
        }
        Ok(())
    }

    /// Swaps `i` with `i ^ flip` for every `i` where `cond` holds. `cond`
    /// must not depend on the bits in `flip`.
    fn flip_where(&mut self, flip: usize, cond: impl Fn(usize) -> bool) {
        let hi = 1usize << (usize::BITS - 1 - flip.leading_zeros());
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + hi {
                if cond(i) {
                    self.amps.swap(i, i ^ flip);
                }
            }
            base += 2 * hi;
        }
    }

    fn apply_block(&mut self, targets: &[QubitId], u: &Matrix, cond: impl Fn(usize) -> bool) {
        let k = targets.len();
        let block = 1usize << k;
        let offsets: Vec<usize> = (0..block)
            .map(|l| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| l >> j & 1 == 1)
                    .fold(0, |acc, (_, q)| acc | q.mask())
            })
            .collect();
        if u.is_diagonal() {
            let diag: Vec<Complex<T>> = (0..block).map(|l| cast(u[(l, l)])).collect();
            for (i, a) in self.amps.iter_mut().enumerate() {
                if cond(i) {
                    let local = targets
                        .iter()
                        .enumerate()
                        .fold(0, |l, (j, q)| l | (i >> q.0 & 1) << j);
                    *a *= diag[local];
                }
            }
            return;
        }

        let tmask = offsets[block - 1];
        let m: Matrix<T> = u.cast();
        let mut buf = vec![Complex::<T>::zero(); block];
        for i in 0..self.amps.len() {
            if i & tmask != 0 || !cond(i) {
                continue;
            }
            for (b, o) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[i | o];
            }
            for (r, o) in offsets.iter().enumerate() {
                self.amps[i | o] = m.row(r).iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
    }

    /// Textual dump: one line `bits re im` per amplitude with modulus above
    /// [`DUMP_THRESHOLD`], fixed to 15 decimals; bits are printed with qubit
    /// 0 rightmost.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm().to_f64() > DUMP_THRESHOLD {
                let bits = if self.width == 0 {
                    String::new()
                } else {
                    format!("{:0w$b}", i, w = self.width)
                };
                writeln!(out, "{bits} {:.15} {:.15}", a.re.to_f64(), a.im.to_f64()).unwrap();
            }
        }
        out
    }
}

impl<T: Real> std::fmt::Display for StateVector<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Applies one gate, consuming and returning the state.
pub fn apply_gate<T: Real>(
    mut state: StateVector<T>,
    gate: &Gate,
) -> Result<StateVector<T>, SimError> {
    state.apply(gate)?;
    Ok(state)
}

/// Applies the circuit's layers in order.
pub fn run<T: Real>(
    circuit: &Circuit,
    mut state: StateVector<T>,
) -> Result<StateVector<T>, SimError> {
    run_in_place(circuit, &mut state)?;
    Ok(state)
}

pub fn run_in_place<T: Real>(
    circuit: &Circuit,
    state: &mut StateVector<T>,
) -> Result<(), SimError> {
    if circuit.width() != state.width() {
        return Err(SimError::WidthMismatch {
            circuit: circuit.width(),
            state: state.width(),
        });
    }
    for g in circuit.gates() {
        state.apply(g)?;
    }
    Ok(())
}

/// Full unitary of a circuit; column `j` is the image of basis state `j`.
pub fn unitary_of<T: Real>(circuit: &Circuit) -> Result<Matrix<T>, SimError> {
    unitary_of_with_cap(circuit, DEFAULT_UNITARY_CAP)
}

pub fn unitary_of_with_cap<T: Real>(circuit: &Circuit, cap: usize) -> Result<Matrix<T>, SimError> {
    let w = circuit.width();
    if w > cap {
        return Err(SimError::TooWide { width: w, cap });
    }
    let mut u = Matrix::zeros(1 << w);
    for j in 0..1 << w {
        let out = run(circuit, StateVector::<T>::basis(w, j))?;
        u.set_column(j, out.amplitudes());
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaPurityResult {
    pub pure: bool,
    /// Probability mass on basis states with any ancilla bit set.
    pub leakage: f64,
}

pub fn check_ancilla_purity<T: Real>(
    state: &StateVector<T>,
    ancillae: &[QubitId],
) -> AncillaPurityResult {
    check_ancilla_purity_with_tol(state, ancillae, PURITY_TOL)
}

pub fn check_ancilla_purity_with_tol<T: Real>(
    state: &StateVector<T>,
    ancillae: &[QubitId],
    tol: f64,
) -> AncillaPurityResult {
    let mask = ancillae.iter().fold(0usize, |m, q| m | 1 << q.0);
    let leakage = state
        .amps
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, a)| a.norm_sqr().to_f64())
        .sum::<f64>();
    AncillaPurityResult {
        pure: leakage <= tol,
        leakage,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::ir::{qubits, LayeringDiscipline, QubitRole};

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn mod2_on_two_true_inputs_leaves_target() {
        // inputs q0..q2 = 1,1,0 ; target q3
        let g = Gate::mod_q(qubits([0, 1, 2]), 2, 3).unwrap();
        let s = apply_gate(StateVector::<f64>::basis(4, 0b0011), &g).unwrap();
        assert_eq!(s.amplitude(0b0011), c(1.0, 0.0));
    }

    #[test]
    fn mod3_on_four_true_inputs_flips_target() {
        let g = Gate::mod_q(qubits(0..4), 3, 4).unwrap();
        let s = apply_gate(StateVector::<f64>::basis(5, 0b01111), &g).unwrap();
        assert_eq!(s.amplitude(0b11111), c(1.0, 0.0));
    }

    #[test]
    fn cnot_copies_superposition() {
        let (a, b) = (0.6, 0.8);
        let s = StateVector::from_amplitudes(vec![c(a, 0.0), c(b, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let s = apply_gate(s, &Gate::cnot(0, 1).unwrap()).unwrap();
        assert_eq!(s.amplitude(0b00), c(a, 0.0));
        assert_eq!(s.amplitude(0b11), c(b, 0.0));
        assert_eq!(s.amplitude(0b01), c(0.0, 0.0));
    }

    #[test]
    fn hadamard_twice_is_identity() {
        for j in 0..8 {
            let s = StateVector::<f64>::basis(3, j);
            let t = apply_gate(
                apply_gate(s.clone(), &Gate::hadamard(1)).unwrap(),
                &Gate::hadamard(1),
            )
            .unwrap();
            assert!(s.distance(&t) < 1e-15);
        }
    }

    #[test]
    fn negated_controls_fire_on_zero() {
        let g = Gate::toffoli(qubits([0, 1]), 2)
            .unwrap()
            .negate(qubits([1]))
            .unwrap();
        let s = apply_gate(StateVector::<f64>::basis(3, 0b001), &g).unwrap();
        assert_eq!(s.amplitude(0b101), c(1.0, 0.0));
        let s = apply_gate(StateVector::<f64>::basis(3, 0b011), &g).unwrap();
        assert_eq!(s.amplitude(0b011), c(1.0, 0.0));
    }

    #[test]
    fn block_unitary_uses_little_endian_targets() {
        // cyclic shift |x> -> |x+1 mod 4> on targets [q2, q0]
        let m = Matrix::permutation(4, |x| (x + 1) % 4);
        let g = Gate::controlled_u(vec![], qubits([2, 0]), m).unwrap();
        // local x = bit(q2) + 2*bit(q0); start with q2=1 (x=1) -> x=2 means q0=1
        let s = apply_gate(StateVector::<f64>::basis(3, 0b100), &g).unwrap();
        assert_eq!(s.amplitude(0b001), c(1.0, 0.0));
    }

    #[test]
    fn empty_circuit_is_identity_and_cnot_unitary() {
        let roles = vec![QubitRole::Input, QubitRole::Target];
        let empty = Circuit::empty(roles.clone(), LayeringDiscipline::Strict);
        let s = StateVector::<f64>::plus(2, 1);
        assert_eq!(run(&empty, s.clone()).unwrap(), s);

        let cx = Circuit::new(
            roles,
            LayeringDiscipline::Strict,
            vec![vec![Gate::cnot(0, 1).unwrap()].into()],
        )
        .unwrap();
        let u: Matrix = unitary_of(&cx).unwrap();
        let expected = Matrix::permutation(4, |j| if j & 1 == 1 { j ^ 2 } else { j });
        assert_eq!(u.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn unitary_cap_and_width_errors() {
        let wide = Circuit::empty(vec![QubitRole::Input; 13], LayeringDiscipline::Strict);
        assert!(matches!(
            unitary_of::<f64>(&wide),
            Err(SimError::TooWide { width: 13, cap: 12 })
        ));
        let narrow = Circuit::empty(vec![QubitRole::Input; 2], LayeringDiscipline::Strict);
        assert!(matches!(
            run(&narrow, StateVector::<f64>::zero(3)),
            Err(SimError::WidthMismatch { .. })
        ));
        let mut s = StateVector::<f64>::zero(2);
        assert!(matches!(
            s.apply(&Gate::hadamard(4)),
            Err(SimError::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn symmetric_phase_marks_all_ones() {
        let g = Gate::symmetric_phase(qubits([0]), 1, PI).unwrap();
        let s = apply_gate(StateVector::<f64>::basis(2, 3), &g).unwrap();
        assert!((s.amplitude(3) - c(-1.0, 0.0)).norm() < 1e-15);
        let s = apply_gate(StateVector::<f64>::basis(2, 2), &g).unwrap();
        assert_eq!(s.amplitude(2), c(1.0, 0.0));
    }

    #[test]
    fn purity_of_entangled_copy() {
        let s =
            StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0)])
                .unwrap();
        let r = check_ancilla_purity(&s, &qubits([1]));
        assert!(!r.pure);
        assert!((r.leakage - 0.64).abs() < 1e-12);

        let p = StateVector::<f64>::plus(2, 0);
        let r = check_ancilla_purity(&p, &qubits([1]));
        assert!(r.pure);
        assert_eq!(r.leakage, 0.0);
    }

    #[test]
    fn dump_lists_nonzero_amplitudes_with_qubit0_rightmost() {
        let s = StateVector::<f64>::plus(3, 1);
        let d = s.dump();
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("000 "));
        assert!(lines[1].starts_with("010 "));
        assert_eq!(lines[1], "010 0.707106781186548 0.000000000000000");
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(matches!(
            StateVector::<f64>::from_amplitudes(vec![c(1.0, 0.0); 3]),
            Err(SimError::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            StateVector::<f64>::from_amplitudes(vec![c(1.0, 0.0); 2]),
            Err(SimError::NotNormalized(_))
        ));
    }

    #[test]
    fn single_precision_simulation() {
        let g = Gate::hadamard(0);
        let s = apply_gate(StateVector::<f32>::zero(1), &g).unwrap();
        assert!((s.amplitude(1).re - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-7);
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }
}
