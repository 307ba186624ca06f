//! Scalar abstraction for the group-arithmetic core.
//!
//! Everything that enumerates group elements is generic over [`Real`], a
//! floating-point scalar with a known unit roundoff and a decimal-string
//! constructor. Two implementations are provided: plain `f64` and the
//! double-double type [`dd::DoubleDouble`] (~106 bits), which is the default
//! for enumeration so that error bounds stay far below the deduplication
//! tolerance.

use num_traits::Float;

pub mod dd;

pub use dd::DoubleDouble;

/// Error from [`Real::from_decimal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRealError(pub String);

impl std::fmt::Display for ParseRealError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid decimal literal: {}", self.0)
    }
}

impl std::error::Error for ParseRealError {}

/// Floating-point scalar usable for precision-tracked group arithmetic.
pub trait Real:
    Float
    + num_traits::FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Relative unit roundoff of one arithmetic operation.
    fn unit_roundoff() -> f64;

    /// Mantissa precision in bits.
    fn precision_bits() -> u32;

    /// Parse a plain decimal literal (optional sign, digits, optional
    /// fractional part, optional exponent) at full working precision.
    fn from_decimal(s: &str) -> Result<Self, ParseRealError> {
        parse_decimal(s)
    }

    fn to_f64(self) -> f64;

    fn of_f64(x: f64) -> Self;
}

impl Real for f64 {
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }

    fn precision_bits() -> u32 {
        53
    }

    fn from_decimal(s: &str) -> Result<Self, ParseRealError> {
        // std parsing is correctly rounded.
        s.trim().parse::<f64>().map_err(|_| ParseRealError(s.to_string()))
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn of_f64(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    fn unit_roundoff() -> f64 {
        f32::EPSILON as f64 / 2.0
    }

    fn precision_bits() -> u32 {
        24
    }

    fn from_decimal(s: &str) -> Result<Self, ParseRealError> {
        s.trim().parse::<f32>().map_err(|_| ParseRealError(s.to_string()))
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn of_f64(x: f64) -> Self {
        x as f32
    }
}

impl Real for DoubleDouble {
    fn unit_roundoff() -> f64 {
        // 2^-105; conservative for the renormalized double-double format.
        2.0f64.powi(-105)
    }

    fn precision_bits() -> u32 {
        105
    }

    fn to_f64(self) -> f64 {
        self.hi()
    }

    fn of_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
}

/// Generic decimal parser: exact digit accumulation in chunks that fit the
/// mantissa, then one division by a power of ten.
fn parse_decimal<T: Real>(input: &str) -> Result<T, ParseRealError> {
    let s = input.trim();
    let bad = || ParseRealError(input.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let (neg, rest) = match s.as_bytes()[0] {
        b'+' => (false, &s[1..]),
        b'-' => (true, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp10): (&str, i64) = match rest.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = rest[i + 1..].parse().map_err(|_| bad())?;
            (&rest[..i], e)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .map(|b| {
            if b.is_ascii_digit() {
                Ok(b - b'0')
            } else {
                Err(bad())
            }
        })
        .collect::<Result<_, _>>()?;
    // value = digits * 10^(exp10 - frac_len)
    let scale = exp10 - frac_part.len() as i64;
    let ten = T::from_u8(10).unwrap();
    // Accumulate in chunks of <= 15 digits (exact in any Real), combining
    // chunks with one multiply+add each.
    let mut value = T::zero();
    for chunk in digits.chunks(15) {
        let mut c: u64 = 0;
        for &d in chunk {
            c = c * 10 + d as u64;
        }
        let mut p = T::one();
        for _ in 0..chunk.len() {
            p = p * ten;
        }
        value = value * p + T::from_u64(c).unwrap();
    }
    let mut pow = T::one();
    for _ in 0..scale.unsigned_abs() {
        pow = pow * ten;
    }
    if scale < 0 {
        value = value / pow;
    } else {
        value = value * pow;
    }
    Ok(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_f64_roundtrip() {
        let x: f64 = Real::from_decimal("2.4142135623730951").unwrap();
        assert_eq!(x, 2.4142135623730951f64);
        assert!(<f64 as Real>::from_decimal("nope").is_err());
        assert!(<f64 as Real>::from_decimal("").is_err());
    }

    #[test]
    fn parse_dd_high_precision() {
        // sqrt(2) to 40 digits; compare against Newton-refined sqrt.
        let x: DoubleDouble =
            Real::from_decimal("1.414213562373095048801688724209698078570").unwrap();
        let two = DoubleDouble::from_f64(2.0);
        let err = (x * x - two).abs();
        assert!(err.to_f64() < 1e-30, "err = {:e}", err.to_f64());
    }

    #[test]
    fn parse_dd_exponent_forms() {
        let a: DoubleDouble = Real::from_decimal("-1.25e2").unwrap();
        assert_eq!(a.to_f64(), -125.0);
        let b: DoubleDouble = Real::from_decimal("0.0625").unwrap();
        assert_eq!(b.to_f64(), 0.0625);
    }
}
