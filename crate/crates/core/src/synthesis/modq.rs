//! MOD_q gates from controlled counting permutations.
//!
//! A `k = ceil(log2 q)` qubit work block holds a counter. Each true input
//! steps the counter once around a `q`-cycle, so the block returns to
//! `|0>` exactly when the number of true inputs is a multiple of `q`. An
//! OR of the work bits onto the target then realises MOD_q.
//!
//! The sequential form applies one controlled step per input. The constant
//! depth form diagonalises the step, `M = T^dagger D T`, copies the
//! rotated counter onto one block per input and applies every controlled
//! `D` in a single layer.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{cat_log_depth, SynthError};
use crate::ir::zip_layers;
use crate::ir::{
    qubits, Circuit, CircuitBuilder, Gate, Layer, LayeringDiscipline, QubitId, QubitRole,
};
use crate::matrix::Matrix;
use crate::num::{ceil_log2, Real};

/// The counting step `M`, its diagonal form `D` and the change of basis
/// `T` with `T^dagger D T = M`.
///
/// `M` is the permutation whose row `x` has its one in column
/// `(x + 1) mod q` for `x < q`, fixing the states `x >= q`; read as an
/// operator on row vectors it sends `<x|` to `<x + 1|`. On kets it steps
/// `|x>` to `|x - 1 mod q>`; either way `|0>` has period exactly `q`.
#[derive(Debug, Clone)]
pub struct ModQPlan<T: Real = f64> {
    pub q: usize,
    pub k: usize,
    pub m: Matrix<T>,
    pub t: Matrix<T>,
    pub d: Matrix<T>,
}

pub fn modq_plan<T: Real>(q: usize) -> Result<ModQPlan<T>, SynthError> {
    if q < 2 {
        return Err(SynthError::Modulus(q));
    }
    let k = ceil_log2(q);
    let dim = 1usize << k;
    let m = Matrix::permutation(dim, |x| if x < q { (x + q - 1) % q } else { x });

    let qf = T::from_f64(q as f64);
    let tau = T::TAU();
    let omega = |e: usize| {
        let a = tau * T::from_f64((e % q) as f64) / qf;
        Complex::new(a.cos(), a.sin())
    };
    let diag: Vec<Complex<T>> = (0..dim)
        .map(|j| if j < q { omega(j) } else { Complex::one() })
        .collect();
    let d = Matrix::diagonal(&diag);

    // Row j of T is the conjugated Fourier vector with eigenvalue omega^j.
    let norm = T::one() / qf.sqrt();
    let mut t = Matrix::zeros(dim);
    for j in 0..dim {
        for x in 0..dim {
            t[(j, x)] = match (j < q, x < q) {
                (true, true) => omega(j * x).conj() * norm,
                (false, false) if j == x => Complex::one(),
                _ => Complex::zero(),
            };
        }
    }
    Ok(ModQPlan { q, k, m, t, d })
}

/// Register layout shared by both MOD_q circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModQLayout {
    pub inputs: Vec<QubitId>,
    pub target: QubitId,
    pub work: Vec<QubitId>,
    /// `copies[i]` is the block controlled by input `i`; empty for the
    /// sequential circuit.
    pub copies: Vec<Vec<QubitId>>,
}

impl ModQLayout {
    pub fn new(n: usize, q: usize, with_copies: bool) -> Self {
        let k = ceil_log2(q);
        let base = n + 1 + k;
        Self {
            inputs: qubits(0..n),
            target: QubitId(n),
            work: qubits(n + 1..base),
            copies: if with_copies {
                (0..n)
                    .map(|i| qubits(base + i * k..base + (i + 1) * k))
                    .collect()
            } else {
                vec![]
            },
        }
    }

    pub fn width(&self) -> usize {
        self.inputs.len() + 1 + self.work.len() + self.copies.iter().map(Vec::len).sum::<usize>()
    }

    /// Copy ancillae, the count the constant-depth construction promises.
    pub fn copy_ancillae(&self) -> usize {
        self.copies.iter().map(Vec::len).sum()
    }

    fn roles(&self) -> Vec<QubitRole> {
        let mut roles = vec![QubitRole::Ancilla; self.width()];
        for q in &self.inputs {
            roles[q.0] = QubitRole::Input;
        }
        roles[self.target.0] = QubitRole::Target;
        roles
    }
}

/// OR of the work bits onto the target: X on the target, then a Toffoli
/// reading every work bit negated.
fn or_detect(work: &[QubitId], target: QubitId) -> Result<[Layer; 2], SynthError> {
    let tof = Gate::toffoli(work.to_vec(), target)?.negate(work.to_vec())?;
    Ok([vec![Gate::pauli_x(target)].into(), vec![tof].into()])
}

/// Unparallelised reference: one controlled step per input, OR-detect,
/// then the inverse steps. Depth `2n + 2`.
pub fn modq_sequential(n: usize, q: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let plan = modq_plan::<f64>(q)?;
    let lay = ModQLayout::new(n, q, false);
    let mut b = CircuitBuilder::new(lay.roles(), LayeringDiscipline::Strict);
    let m_dag = plan.m.adjoint();
    for &i in &lay.inputs {
        b.layer(vec![Gate::controlled_u(
            vec![i],
            lay.work.clone(),
            plan.m.clone(),
        )?]);
    }
    b.layers(or_detect(&lay.work, lay.target)?);
    for &i in lay.inputs.iter().rev() {
        b.layer(vec![Gate::controlled_u(
            vec![i],
            lay.work.clone(),
            m_dag.clone(),
        )?]);
    }
    Ok(b.build()?)
}

/// Copies each work qubit onto its column of copy qubits (`copies[i][j]`
/// receives work bit `j`). With fanout gates this is one layer; under the
/// strict discipline it is a seed CNOT into the first copy followed by a
/// log-depth doubling over the `n` copies.
fn fan_layers(lay: &ModQLayout, discipline: LayeringDiscipline) -> Result<Vec<Layer>, SynthError> {
    let column = |j: usize| lay.copies.iter().map(|blk| blk[j]).collect::<Vec<_>>();
    match discipline {
        LayeringDiscipline::WithFanout => {
            let gates = lay
                .work
                .iter()
                .enumerate()
                .map(|(j, &w)| Gate::fanout(w, column(j)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(vec![gates.into()])
        }
        LayeringDiscipline::Strict => {
            let cat = cat_log_depth(lay.inputs.len())?;
            let mut parts = Vec::with_capacity(lay.work.len());
            for (j, &w) in lay.work.iter().enumerate() {
                let col = column(j);
                let mut seq = vec![Layer::new(vec![Gate::cnot(w, col[0])?])];
                seq.extend(cat.layers().iter().map(|l| l.remap(&col)));
                parts.push(seq);
            }
            Ok(zip_layers(parts))
        }
    }
}

/// Constant-depth MOD_q on `n` inputs.
///
/// Layers: T on the work block, fan the work block out to the `n` copy
/// blocks, controlled-D from every input onto its block (one layer), un-fan,
/// T^dagger, OR-detect onto the target, then the inverse of everything
/// before the OR-detect. With [`LayeringDiscipline::WithFanout`] the depth
/// depends only on `q`; under `Strict` each of the four fan phases grows by
/// `ceil(log2 n)` layers.
pub fn modq_constant_depth(
    n: usize,
    q: usize,
    discipline: LayeringDiscipline,
) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let plan = modq_plan::<f64>(q)?;
    let lay = ModQLayout::new(n, q, true);

    let fan = fan_layers(&lay, discipline)?;
    let unfan: Vec<Layer> = fan.iter().rev().map(Layer::adjoint).collect();
    let mut compute = vec![Layer::new(vec![Gate::controlled_u(
        vec![],
        lay.work.clone(),
        plan.t.clone(),
    )?])];
    compute.extend(fan);
    compute.push(
        lay.inputs
            .iter()
            .zip(&lay.copies)
            .map(|(&i, blk)| Gate::controlled_u(vec![i], blk.clone(), plan.d.clone()))
            .collect::<Result<Vec<_>, _>>()?
            .into(),
    );
    compute.extend(unfan);
    compute.push(
        vec![Gate::controlled_u(
            vec![],
            lay.work.clone(),
            plan.t.adjoint(),
        )?]
        .into(),
    );

    let mut b = CircuitBuilder::new(lay.roles(), discipline);
    b.layers(compute.iter().cloned());
    b.layers(or_detect(&lay.work, lay.target)?);
    b.layers(compute.iter().rev().map(Layer::adjoint));
    Ok(b.build()?)
}
