//! Bridges between exact `num` integers and `dashu` binary floats.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;

pub type Float = FBig<HalfEven, 2>;

/// Default number of significant decimal digits for log-domain values.
pub const DEFAULT_DIGITS: u32 = 60;

/// Working precision in bits for a target number of decimal digits.
pub fn working_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
}

/// Values whose natural log is below `-cutoff(digits)` are indistinguishable
/// from zero at the requested precision (with a margin of roughly 20 digits).
pub fn negligible_log(digits: u32) -> f64 {
    (digits as f64 + 20.0) * std::f64::consts::LN_10
}

pub fn ubig(x: &BigUint) -> UBig {
    UBig::from_le_bytes(&x.to_bytes_le())
}

pub fn ibig(x: &BigInt) -> IBig {
    let (sign, mag) = x.to_bytes_le();
    let m = IBig::from(UBig::from_le_bytes(&mag));
    match sign {
        Sign::Minus => -m,
        _ => m,
    }
}

pub fn int_to_float(x: &BigInt, bits: usize) -> Float {
    Float::from(ibig(x)).with_precision(bits).value()
}

pub fn uint_to_float(x: &BigUint, bits: usize) -> Float {
    Float::from(ubig(x)).with_precision(bits).value()
}

pub fn ratio_to_float(x: &BigRational, bits: usize) -> Float {
    int_to_float(x.numer(), bits) / int_to_float(x.denom(), bits)
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

pub fn zero(bits: usize) -> Float {
    Float::ZERO.with_precision(bits).value()
}

pub fn one(bits: usize) -> Float {
    Float::ONE.with_precision(bits).value()
}

/// `exp(x)` for `x <= 0`, flushed to zero below the negligible threshold.
pub fn exp_nonpositive(x: &Float, digits: u32, bits: usize) -> Float {
    if to_f64(x) < -negligible_log(digits) {
        zero(bits)
    } else {
        x.exp()
    }
}
