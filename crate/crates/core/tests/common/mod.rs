#![allow(dead_code)]

use std::io::Write;

use num_complex::Complex;
use qdepth::matrix::Matrix;
use qdepth::simulator::StateVector;
use qdepth::{Gate, QubitId, C64};
use rand::seq::SliceRandom;
use rand::Rng;

/// Normalized vector with components drawn uniformly from the unit square.
pub fn random_amps<R: Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn random_state<R: Rng>(rng: &mut R, width: usize) -> StateVector {
    StateVector::from_amplitudes(random_amps(rng, 1 << width)).unwrap()
}

/// A generic element of U(2).
pub fn random_unitary_1q<R: Rng>(rng: &mut R) -> Matrix {
    let tau = std::f64::consts::TAU;
    let (a, b, c, g) = (
        rng.gen_range(0.0..tau),
        rng.gen_range(0.0..tau),
        rng.gen_range(0.0..tau),
        rng.gen_range(0.0..tau),
    );
    let e = |t: f64| C64::from_polar(1.0, t);
    let global = e(g);
    Matrix::from_rows(&[
        vec![global * e(b) * a.cos(), -global * e(-c) * a.sin()],
        vec![global * e(c) * a.sin(), global * e(-b) * a.cos()],
    ])
    .unwrap()
}

/// A random gate of any kind on at most `width` qubits (`width >= 2`), with
/// random control negations.
pub fn random_gate<R: Rng>(rng: &mut R, width: usize) -> Gate {
    let mut qs: Vec<QubitId> = (0..width).map(QubitId).collect();
    qs.shuffle(rng);
    let target = qs[0];
    let ncontrols = rng.gen_range(1..width);
    let controls: Vec<QubitId> = qs[1..=ncontrols].to_vec();
    let negated: Vec<QubitId> = controls
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.3))
        .collect();
    let gate = match rng.gen_range(0..9) {
        0 => return Gate::hadamard(target),
        1 => return Gate::pauli_x(target),
        2 => return Gate::single_qubit(target, random_unitary_1q(rng)).unwrap(),
        3 => Gate::cnot(controls[0], target).unwrap().negate(
            negated
                .iter()
                .copied()
                .filter(|q| *q == controls[0])
                .collect(),
        ),
        4 => Gate::toffoli(controls, target).unwrap().negate(negated),
        5 => {
            if ncontrols >= 2 && rng.gen_bool(0.5) {
                let u = random_unitary_1q(rng).kron(&random_unitary_1q(rng));
                let targets = vec![target, controls[0]];
                let controls = controls[1..].to_vec();
                let negated = negated
                    .into_iter()
                    .filter(|q| controls.contains(q))
                    .collect();
                Gate::controlled_u(controls, targets, u)
                    .unwrap()
                    .negate(negated)
            } else {
                Gate::controlled_u(controls, vec![target], random_unitary_1q(rng))
                    .unwrap()
                    .negate(negated)
            }
        }
        6 => Gate::mod_q(controls, rng.gen_range(2..6), target)
            .unwrap()
            .negate(negated),
        7 => {
            let control = controls[0];
            let targets: Vec<QubitId> = qs
                .iter()
                .copied()
                .filter(|q| *q != control)
                .take(rng.gen_range(1..width))
                .collect();
            Gate::fanout(control, targets)
                .unwrap()
                .negate(negated.into_iter().filter(|q| *q == control).collect())
        }
        _ => Gate::symmetric_phase(controls, target, rng.gen_range(-3.5..3.5))
            .unwrap()
            .negate(negated),
    };
    gate.unwrap()
}

/// Writes a criterion line straight to the process stderr so it shows even
/// when the test harness captures output.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("acceptance {id:>2} {verdict} {name}: {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}
