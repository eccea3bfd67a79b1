//! Synthesis and verification of constant-depth fanout, parity and MOD_q
//! circuits.
//!
//! The crate builds layered circuits ([`ir`]), simulates them on dense
//! state vectors ([`simulator`]), constructs the fanout / cat-state /
//! parity / MOD_q / reversible-embedding families ([`synthesis`]) and
//! checks them against brute-force gate semantics ([`verify`]).
//!
//! Numerics are generic over [`num::Real`]; the aliases below fix the
//! scalar to `f64` for everyday use.

pub mod ir;
pub mod matrix;
pub mod num;
pub mod simulator;
pub mod synthesis;
pub mod verify;

pub use ir::{
    Circuit, CircuitBuilder, CircuitError, Gate, GateKind, Layer, LayeringDiscipline, QubitId,
    QubitRole,
};

/// Double precision complex amplitude.
pub type C64 = num_complex::Complex<f64>;
/// Double precision state vector.
pub type State = simulator::StateVector<f64>;
/// Single precision state vector.
pub type State32 = simulator::StateVector<f32>;
/// Double precision dense unitary.
pub type Unitary = matrix::Matrix<f64>;
