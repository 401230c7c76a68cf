//! Binary fixed-point reals backed by `BigInt`.
//!
//! Integer combinations of fixed-point values at a common scale are exact,
//! so the only error in `Σ u_j λ_j` is the per-frequency evaluation error
//! (at most one unit in the last place each).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fixed {
    raw: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn from_raw(raw: BigInt, bits: u32) -> Self {
        Self { raw, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self::from_raw(BigInt::zero(), bits)
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self::from_raw(BigInt::from(n) << bits, bits)
    }

    /// Exact conversion of a finite `f64` (rounded to the nearest unit if
    /// `bits` is coarser than the float).
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "Fixed::from_f64 needs a finite value");
        if x == 0.0 {
            return Self::zero(bits);
        }
        let b = x.to_bits();
        let exp = ((b >> 52) & 0x7ff) as i64;
        let frac = b & ((1u64 << 52) - 1);
        let (mant, e2) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let shift = e2 + i64::from(bits);
        let mut raw = BigInt::from(mant);
        if shift >= 0 {
            raw <<= shift as usize;
        } else {
            raw = round_shift(&raw, (-shift) as u32);
        }
        if x < 0.0 {
            raw = -raw;
        }
        Self { raw, bits }
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self::from_raw(self.raw.abs(), self.bits)
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(-&self.raw, self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let keep = 120u32;
        if self.bits > keep {
            let r = round_shift(&self.raw, self.bits - keep);
            r.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(keep as i32))
        } else {
            self.raw.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.bits as i32))
        }
    }

    /// `2^{-bits/2}`, the default zero-detection threshold.
    pub fn half_precision_threshold(bits: u32) -> Self {
        Self::from_raw(BigInt::one() << (bits - bits / 2), bits)
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_int(n: u64, bits: u32) -> Self {
        assert!(n >= 1, "ln of zero");
        let p = bits + GUARD_BITS;
        let e = 63 - n.leading_zeros();
        let pow = BigInt::one() << e;
        let n_big = BigInt::from(n);
        // ln n = e ln 2 + 2 atanh((n - 2^e) / (n + 2^e))
        let ln2 = atanh_scaled(&BigInt::one(), &BigInt::from(3), p) * 2;
        let rest = atanh_scaled(&(&n_big - &pow), &(&n_big + &pow), p) * 2;
        let raw = ln2 * BigInt::from(e) + rest;
        Self::from_raw(round_shift(&raw, GUARD_BITS), bits)
    }

    /// Square root of a non-negative integer, truncated.
    pub fn sqrt_int(n: u64, bits: u32) -> Self {
        let scaled = BigUint::from(n) << (2 * bits);
        Self::from_raw(BigInt::from(scaled.sqrt()), bits)
    }

    /// Nearest fixed-point value to a decimal literal such as `-1.25e-3`.
    pub fn parse_decimal(text: &str, bits: u32) -> Result<Self, String> {
        let s = text.trim();
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa_part, exp_part) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_digits, frac_digits) = match mantissa_part.find('.') {
            Some(i) => (&mantissa_part[..i], &mantissa_part[i + 1..]),
            None => (mantissa_part, ""),
        };
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(format!("not a decimal literal: {text:?}"));
        }
        if !int_digits.bytes().chain(frac_digits.bytes()).all(|c| c.is_ascii_digit()) {
            return Err(format!("not a decimal literal: {text:?}"));
        }
        let exp: i64 = match exp_part {
            Some(e) => e.parse().map_err(|_| format!("bad exponent in {text:?}"))?,
            None => 0,
        };
        let digits = format!("{int_digits}{frac_digits}");
        let mantissa: BigInt = digits
            .parse()
            .map_err(|_| format!("not a decimal literal: {text:?}"))?;
        let exp10 = exp - frac_digits.len() as i64;
        if exp10.abs() > 10_000 {
            return Err(format!("exponent out of range in {text:?}"));
        }
        let mut raw = if exp10 >= 0 {
            (mantissa * num_traits::pow(BigInt::from(10), exp10 as usize)) << bits
        } else {
            let den = num_traits::pow(BigInt::from(10), (-exp10) as usize);
            let num: BigInt = mantissa << bits;
            // round half away from zero; num is non-negative here
            let twice: BigInt = num * 2 + &den;
            twice.div_floor(&(den * 2))
        };
        if neg {
            raw = -raw;
        }
        Ok(Self { raw, bits })
    }

    /// Rescales to `bits`, rounding to nearest when coarsening.
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Self::from_raw(&self.raw << (bits - self.bits), bits),
            Ordering::Less => Self::from_raw(round_shift(&self.raw, self.bits - bits), bits),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits, "fixed-point scale mismatch");
        Self::from_raw(&self.raw + &other.raw, self.bits)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits, "fixed-point scale mismatch");
        Self::from_raw(&self.raw - &other.raw, self.bits)
    }

    pub fn mul_int(&self, u: i64) -> Self {
        Self::from_raw(&self.raw * u, self.bits)
    }

    /// Halves the value, rounding to nearest.
    pub fn half(&self) -> Self {
        Self::from_raw(round_shift(&self.raw, 1), self.bits)
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.raw.abs().cmp(&other.raw.abs())
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.bits == other.bits {
            self.raw.cmp(&other.raw)
        } else {
            let bits = self.bits.max(other.bits);
            self.with_bits(bits).raw.cmp(&other.with_bits(bits).raw)
        }
    }
}

impl fmt::Display for Fixed {
    /// Decimal expansion with about `bits · log10 2` fractional digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.bits) * std::f64::consts::LOG10_2).floor() as usize;
        let digits = f.precision().unwrap_or(digits);
        let scale = num_traits::pow(BigInt::from(10), digits);
        let abs = self.raw.abs();
        let scaled = round_shift(&(abs * scale.clone()), self.bits);
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if self.raw.sign() == Sign::Minus && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            write!(f, "{sign}{int}")
        } else {
            write!(f, "{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
        }
    }
}

/// `x >> s` rounded to nearest (ties away from zero).
fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    if x.sign() == Sign::Minus {
        -((-x + half) >> s)
    } else {
        (x + half) >> s
    }
}

/// `atanh(a/b) · 2^p` for `|a/b| <= 1/3`, by the odd power series.
fn atanh_scaled(a: &BigInt, b: &BigInt, p: u32) -> BigInt {
    let a2 = a * a;
    let b2 = b * b;
    let mut power = (a << p) / b;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        power = power * &a2 / &b2;
        k += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_match_f64() {
        for n in 2..200u64 {
            let v = Fixed::ln_int(n, 256).to_f64();
            assert!((v - (n as f64).ln()).abs() < 1e-15, "n={n}");
        }
        assert!(Fixed::ln_int(1, 128).is_zero());
    }

    #[test]
    fn logs_are_consistent_across_precisions() {
        // ln 6 = ln 2 + ln 3 to within a few ulps at 300 bits
        let bits = 300;
        let lhs = Fixed::ln_int(6, bits);
        let rhs = Fixed::ln_int(2, bits).add(&Fixed::ln_int(3, bits));
        assert!(lhs.sub(&rhs).raw().abs() <= BigInt::from(4));
        let coarse = Fixed::ln_int(7, 200);
        let fine = Fixed::ln_int(7, 400).with_bits(200);
        assert!(coarse.sub(&fine).raw().abs() <= BigInt::from(1));
    }

    #[test]
    fn known_digits_of_ln2() {
        let s = format!("{:.40}", Fixed::ln_int(2, 256));
        assert_eq!(s, "0.6931471805599453094172321214581765680755");
    }

    #[test]
    fn sqrt_digits() {
        let s = format!("{:.40}", Fixed::sqrt_int(2, 256));
        assert_eq!(s, "1.4142135623730950488016887242096980785697");
        assert_eq!(Fixed::sqrt_int(9, 64), Fixed::from_int(3, 64));
    }

    #[test]
    fn decimal_parsing() {
        let v = Fixed::parse_decimal("1.25", 64).unwrap();
        assert_eq!(v, Fixed::from_f64(1.25, 64));
        let v = Fixed::parse_decimal("-3e2", 32).unwrap();
        assert_eq!(v, Fixed::from_int(-300, 32));
        let v = Fixed::parse_decimal("0.1", 256).unwrap();
        assert!((v.to_f64() - 0.1).abs() < 1e-17);
        assert!(Fixed::parse_decimal("1.2.3", 64).is_err());
        assert!(Fixed::parse_decimal("abc", 64).is_err());
        assert!(Fixed::parse_decimal("", 64).is_err());
    }

    #[test]
    fn f64_roundtrip() {
        for x in [0.0, 1.0, -2.5, 1e-10, 123456.789, std::f64::consts::PI] {
            assert_eq!(Fixed::from_f64(x, 256).to_f64(), x);
        }
    }
}
