//! Scalar abstraction shared by the simulator and the dense matrix helpers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating point type backing complex amplitudes.
///
/// Implemented for `f32` and `f64`. Gate parameters in the circuit IR are
/// stored in `f64` and converted on use, so a lower precision simulation
/// only loses accuracy at the arithmetic, never in the circuit description.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Machine epsilon scaled to a sensible default comparison tolerance.
    const DEFAULT_TOL: Self;

    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;
}

impl Real for f32 {
    const DEFAULT_TOL: Self = 1e-5;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const DEFAULT_TOL: Self = 1e-12;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

/// Converts an `f64` complex number into the working precision.
#[inline]
pub fn cast<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// `e^{i theta}`
#[inline]
pub fn phase<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Smallest `k` with `2^k >= q`, i.e. `ceil(log2 q)`. Returns 0 for `q <= 1`.
pub fn ceil_log2(q: usize) -> usize {
    if q <= 1 {
        0
    } else {
        (usize::BITS - (q - 1).leading_zeros()) as usize
    }
}
