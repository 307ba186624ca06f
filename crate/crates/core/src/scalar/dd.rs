//! Double-double arithmetic: an unevaluated sum of two `f64`s giving ~106
//! bits of precision. Field operations use the classic error-free
//! transformations (two-sum, fma-based two-prod); division and sqrt are
//! Newton-corrected. Transcendentals that are not precision-critical for the
//! enumeration core fall back to `f64` evaluation on the high word.

use num_traits::{Float, FloatConst, Num, NumCast, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

/// Normalized double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl DoubleDouble {
    pub const fn new_raw(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        DoubleDouble { hi: s, lo: e }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Full-precision exponential: range reduction `x = k ln2 + r`, Taylor
    /// series on `r/512`, then nine squarings and a power-of-two scale.
    fn exp_dd(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::zero();
        }
        if self.is_zero() {
            return DoubleDouble::one();
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self - DoubleDouble::LN_2() * DoubleDouble::from_f64(k);
        let t = r * DoubleDouble::from_f64(1.0 / 512.0);
        // expm1(t) by Taylor; |t| <= ln2/1024 so 10 terms reach ~1e-38.
        let mut term = t;
        let mut sum = t;
        for n in 2..=12u32 {
            term = term * t / DoubleDouble::from_f64(n as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        // (1+p)^512 - 1 by repeated p <- 2p + p^2
        let mut p = sum;
        for _ in 0..9 {
            p = DoubleDouble::from_f64(2.0) * p + p * p;
        }
        let e = DoubleDouble::one() + p;
        let scale = 2.0f64.powi(k as i32);
        DoubleDouble::renorm(e.hi * scale, e.lo * scale)
    }

    /// One Newton step on an f64 seed, used by sqrt.
    pub fn sqrt_dd(self) -> Self {
        if self.hi < 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        if self.hi == 0.0 {
            return DoubleDouble::from_f64(0.0);
        }
        // x_{k+1} = (x_k + a/x_k) / 2, in double-double.
        let x0 = DoubleDouble::from_f64(self.hi.sqrt());
        let x1 = (x0 + self / x0) * DoubleDouble::from_f64(0.5);
        (x1 + self / x1) * DoubleDouble::from_f64(0.5)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> f64 {
        x.hi
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        DoubleDouble::renorm(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        DoubleDouble::renorm(p1, p2)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        // Long division with two correction terms.
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() {
            return DoubleDouble::from_f64(q1);
        }
        let r = self - rhs * DoubleDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r2 = r - rhs * DoubleDouble::from_f64(q2);
        let q3 = r2.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        DoubleDouble::renorm(s, e + q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = (self / rhs).trunc();
        self - rhs * q
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = crate::scalar::ParseRealError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(crate::scalar::ParseRealError(format!("radix {radix}")));
        }
        <Self as crate::scalar::Real>::from_decimal(s)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        // both words contribute for large integers
        Some(t.hi as i64 + t.lo as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|x| if x >= 0 { Some(x as u64) } else { None })
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi)
    }
}

impl NumCast for DoubleDouble {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(DoubleDouble::from_f64)
    }
}

impl num_traits::FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        // exact: split into high/low halves
        let hi = (n >> 31) as f64 * (1u64 << 31) as f64;
        let lo = (n & 0x7fff_ffff) as f64;
        Some(DoubleDouble::from_f64(hi) + DoubleDouble::from_f64(lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = (n >> 32) as f64 * (1u64 << 32) as f64;
        let lo = (n & 0xffff_ffff) as f64;
        Some(DoubleDouble::from_f64(hi) + DoubleDouble::from_f64(lo))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(DoubleDouble::from_f64(n))
    }
}

impl std::fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // display at f64 precision; full precision is available via hi()/lo()
        std::fmt::Display::fmt(&self.hi, f)
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        DoubleDouble::new_raw(std::f64::consts::E, 1.4456468917292502e-16)
    }
    fn FRAC_1_PI() -> Self {
        DoubleDouble::one() / Self::PI()
    }
    fn FRAC_1_SQRT_2() -> Self {
        DoubleDouble::one() / Self::SQRT_2()
    }
    fn FRAC_2_PI() -> Self {
        DoubleDouble::from_f64(2.0) / Self::PI()
    }
    fn FRAC_2_SQRT_PI() -> Self {
        DoubleDouble::from_f64(2.0) / Self::PI().sqrt_dd()
    }
    fn FRAC_PI_2() -> Self {
        Self::PI() * DoubleDouble::from_f64(0.5)
    }
    fn FRAC_PI_3() -> Self {
        Self::PI() / DoubleDouble::from_f64(3.0)
    }
    fn FRAC_PI_4() -> Self {
        Self::PI() * DoubleDouble::from_f64(0.25)
    }
    fn FRAC_PI_6() -> Self {
        Self::PI() / DoubleDouble::from_f64(6.0)
    }
    fn FRAC_PI_8() -> Self {
        Self::PI() * DoubleDouble::from_f64(0.125)
    }
    fn LN_10() -> Self {
        DoubleDouble::new_raw(std::f64::consts::LN_10, -2.1707562233822494e-16)
    }
    fn LN_2() -> Self {
        DoubleDouble::new_raw(std::f64::consts::LN_2, 2.3190468138462996e-17)
    }
    fn LOG10_E() -> Self {
        DoubleDouble::one() / Self::LN_10()
    }
    fn LOG2_E() -> Self {
        DoubleDouble::one() / Self::LN_2()
    }
    fn PI() -> Self {
        DoubleDouble::new_raw(std::f64::consts::PI, 1.2246467991473532e-16)
    }
    fn SQRT_2() -> Self {
        DoubleDouble::from_f64(2.0).sqrt_dd()
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        DoubleDouble::from_f64(f64::NAN)
    }
    fn infinity() -> Self {
        DoubleDouble::from_f64(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        DoubleDouble::from_f64(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        DoubleDouble::from_f64(-0.0)
    }
    fn min_value() -> Self {
        DoubleDouble::from_f64(f64::MIN)
    }
    fn min_positive_value() -> Self {
        DoubleDouble::from_f64(f64::MIN_POSITIVE)
    }
    fn max_value() -> Self {
        DoubleDouble::from_f64(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let f = self.hi.floor();
        if f == self.hi {
            DoubleDouble::renorm(f, self.lo.floor())
        } else {
            DoubleDouble::from_f64(f)
        }
    }
    fn ceil(self) -> Self {
        -((-self).floor())
    }
    fn round(self) -> Self {
        (self + DoubleDouble::from_f64(0.5)).floor()
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn signum(self) -> Self {
        if self.is_zero() {
            DoubleDouble::from_f64(self.hi.signum())
        } else if self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0) {
            DoubleDouble::one()
        } else {
            -DoubleDouble::one()
        }
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        DoubleDouble::one() / self
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return DoubleDouble::one();
        }
        let mut base = if n > 0 { self } else { self.recip() };
        let mut e = n.unsigned_abs();
        let mut acc = DoubleDouble::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        DoubleDouble::from_f64(self.hi.powf(n.hi))
    }
    fn sqrt(self) -> Self {
        self.sqrt_dd()
    }
    fn exp(self) -> Self {
        self.exp_dd()
    }
    fn exp2(self) -> Self {
        (self * DoubleDouble::LN_2()).exp_dd()
    }
    fn ln(self) -> Self {
        // f64 seed + one Newton step with the full-precision exponential:
        // y <- y + x*exp(-y) - 1.
        let y = self.hi.ln();
        if !y.is_finite() || self.hi <= 0.0 {
            return DoubleDouble::from_f64(if self.hi < 0.0 { f64::NAN } else { y });
        }
        let y = DoubleDouble::from_f64(y);
        let r = self * (-y).exp_dd() - DoubleDouble::one();
        y + r
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / DoubleDouble::LN_2()
    }
    fn log10(self) -> Self {
        self.ln() / DoubleDouble::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            DoubleDouble::zero()
        }
    }
    fn cbrt(self) -> Self {
        let y = DoubleDouble::from_f64(self.hi.cbrt());
        if y.is_zero() || !y.is_finite() {
            return y;
        }
        // Newton: y -= (y^3 - x) / (3 y^2)
        let y2 = y * y;
        y - (y2 * y - self) / (DoubleDouble::from_f64(3.0) * y2)
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt_dd()
    }
    fn sin(self) -> Self {
        DoubleDouble::from_f64(self.hi.sin())
    }
    fn cos(self) -> Self {
        DoubleDouble::from_f64(self.hi.cos())
    }
    fn tan(self) -> Self {
        DoubleDouble::from_f64(self.hi.tan())
    }
    fn asin(self) -> Self {
        DoubleDouble::from_f64(self.hi.asin())
    }
    fn acos(self) -> Self {
        DoubleDouble::from_f64(self.hi.acos())
    }
    fn atan(self) -> Self {
        DoubleDouble::from_f64(self.hi.atan())
    }
    fn atan2(self, other: Self) -> Self {
        DoubleDouble::from_f64(self.hi.atan2(other.hi))
    }
    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.25 {
            // direct Taylor avoids cancellation near zero
            let mut term = self;
            let mut sum = self;
            for n in 2..=30u32 {
                term = term * self / DoubleDouble::from_f64(n as f64);
                sum = sum + term;
                if term.hi.abs() < 1e-40 {
                    break;
                }
            }
            sum
        } else {
            self.exp_dd() - DoubleDouble::one()
        }
    }
    fn ln_1p(self) -> Self {
        // 1+x is exact to dd precision for |x| >= 2^-106; the ln Newton
        // step then recovers full accuracy even for tiny x because the
        // seed f64::ln of (1+x).hi is already good to ~1e-16 relative.
        if self.hi.abs() < 1e-20 {
            // ln(1+x) = x - x^2/2 + ...; second term below roundoff
            return self;
        }
        (DoubleDouble::one() + self).ln()
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.25 {
            // sinh x = (expm1(x) - expm1(-x)) / 2, cancellation-free
            let a = self.exp_m1();
            let b = (-self).exp_m1();
            (a - b) * DoubleDouble::from_f64(0.5)
        } else {
            let e = self.exp_dd();
            (e - e.recip()) * DoubleDouble::from_f64(0.5)
        }
    }
    fn cosh(self) -> Self {
        let e = self.exp_dd();
        (e + e.recip()) * DoubleDouble::from_f64(0.5)
    }
    fn tanh(self) -> Self {
        if self.hi.abs() > 20.0 {
            return DoubleDouble::from_f64(self.hi.signum());
        }
        let e2 = (self + self).exp_dd();
        (e2 - DoubleDouble::one()) / (e2 + DoubleDouble::one())
    }
    fn asinh(self) -> Self {
        // ln(x + sqrt(x^2+1)); for x < 0 use oddness to avoid cancellation
        if self.hi < 0.0 {
            return -(-self).asinh();
        }
        (self + (self * self + DoubleDouble::one()).sqrt_dd()).ln()
    }
    fn acosh(self) -> Self {
        if self < DoubleDouble::one() {
            return DoubleDouble::from_f64(f64::NAN);
        }
        // near 1, write x = 1+t and expand inside the log to keep accuracy
        let t = self - DoubleDouble::one();
        if t.hi < 0.5 {
            let s = (t * (t + DoubleDouble::from_f64(2.0))).sqrt_dd();
            (t + s).ln_1p()
        } else {
            (self + (self * self - DoubleDouble::one()).sqrt_dd()).ln()
        }
    }
    fn atanh(self) -> Self {
        if self.hi.abs() >= 1.0 {
            return DoubleDouble::from_f64(self.hi.atanh());
        }
        // atanh x = ln((1+x)/(1-x)) / 2 = ln_1p(2x/(1-x)) / 2
        let r = (self + self) / (DoubleDouble::one() - self);
        r.ln_1p() * DoubleDouble::from_f64(0.5)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
    fn epsilon() -> Self {
        DoubleDouble::from_f64(2.0f64.powi(-105))
    }
    fn to_degrees(self) -> Self {
        self * DoubleDouble::from_f64(180.0) / DoubleDouble::PI()
    }
    fn to_radians(self) -> Self {
        self * DoubleDouble::PI() / DoubleDouble::from_f64(180.0)
    }
}
