//! Float views of arbitrary-precision integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// Natural log of a positive big integer, accurate to f64 rounding.
pub fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().expect("fits in u64") as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("top 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `num / den` as f64 for `|num| ≤ den`, without overflow for huge operands.
pub fn ratio_to_f64(num: &BigInt, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let bits = den.bits().max(num.magnitude().bits());
    let shift = bits.saturating_sub(60);
    let n = (num.magnitude() >> shift).to_f64().unwrap_or(0.0);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    let r = n / d;
    if num.sign() == Sign::Minus {
        -r
    } else {
        r
    }
}

/// Integer approximation of `floor(e^big_l)` keeping at most `bits`
/// significant bits.
///
/// The number of kept bits shrinks once `log₂ x` is large enough that its
/// fractional part (which carries the mantissa) is known to fewer than
/// `bits + 6` bits. A relative slack of `2^{-(kept+4)}` absorbs the rounding
/// of `big_l`, so an exact power of two computed through logarithms lands on
/// the power itself rather than one below it. Bits below the kept ones are
/// zero.
pub fn quantized_floor_exp(big_l: f64, bits: u32) -> BigUint {
    assert!(big_l.is_finite() && big_l >= 0.0, "quantized_floor_exp needs finite L ≥ 0");
    let raw = big_l / std::f64::consts::LN_2;
    let int_bits = raw.max(1.0).log2().ceil() as u32;
    let kept = bits.min(52u32.saturating_sub(int_bits + 6)).max(1);
    let slack = (-((kept + 4) as f64)).exp2();
    if raw <= kept as f64 {
        let x = big_l.exp() * (1.0 + slack);
        return BigUint::from(x.floor() as u64);
    }
    let log2x = raw + slack / std::f64::consts::LN_2;
    let e = log2x.floor();
    let frac = log2x - e;
    let mant = (frac + kept as f64).exp2().floor() as u64;
    BigUint::from(mant) << (e as u64 - kept as u64)
}

/// Decimal for moderate sizes; `m*2^e` with `m` odd beyond 1024 bits, which
/// keeps the quantized exponents of deep constructions short and exact.
pub fn format_big(n: &BigUint) -> String {
    match n.trailing_zeros() {
        Some(e) if n.bits() > 1024 => format!("{}*2^{}", n >> e, e),
        _ => n.to_string(),
    }
}

/// Inverse of [`format_big`].
pub fn parse_big(s: &str) -> Option<BigUint> {
    match s.split_once("*2^") {
        Some((m, e)) => Some(m.parse::<BigUint>().ok()? << e.parse::<u64>().ok()?),
        None => s.parse().ok(),
    }
}
