//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Most negative `ln ε` a catalog weight is trusted at by default.
    ///
    /// This also bounds the size of the integer exponents a construction
    /// produces, since `n_k ≈ 1/ε_k`.
    const DEFAULT_LN_EPS_FLOOR: f64;

    /// Significant bits kept when a reciprocal beyond integer resolution is
    /// turned into an integer exponent.
    const QUANT_BITS: u32;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const DEFAULT_LN_EPS_FLOOR: f64 = -1.0e8;
    const QUANT_BITS: u32 = 40;
}

impl Real for f32 {
    const DEFAULT_LN_EPS_FLOOR: f64 = -80.0;
    const QUANT_BITS: u32 = 11;
}
