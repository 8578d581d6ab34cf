//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the library computes in: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// `self^e`, treating a zero exponent as exactly 1 (also at `self == 0`).
    #[inline]
    fn pow_real(self, e: Self) -> Self {
        if e == Self::zero() {
            Self::one()
        } else if e == Self::one() {
            self
        } else {
            self.powf(e)
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Volume of the unit ball in `R^n` for the supported dimensions.
pub fn unit_ball_volume<T: Real>(n: usize) -> T {
    match n {
        1 => T::lit(2.0),
        2 => T::PI(),
        3 => T::lit(4.0) * T::PI() / T::lit(3.0),
        _ => {
            // Γ-function form for completeness; the grids only use n ≤ 2.
            let nf = n as f64;
            let v = std::f64::consts::PI.powf(nf / 2.0) / gamma_half_integer(n + 2);
            T::lit(v)
        }
    }
}

/// Γ(k/2) for a positive integer k.
fn gamma_half_integer(k: usize) -> f64 {
    let mut k = k;
    let mut acc = if k.is_multiple_of(2) { 1.0 } else { std::f64::consts::PI.sqrt() };
    while k > 2 {
        k -= 2;
        acc *= k as f64 / 2.0;
    }
    acc
}
