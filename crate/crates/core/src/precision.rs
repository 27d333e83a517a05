//! Real numbers carried at a fixed decimal working precision.
//!
//! Backed by `astro-float`; every operation rounds to nearest-even at the
//! precision of its widest operand. Conversions to and from decimal go
//! through exact rationals so printed digits never depend on a binary
//! formatter.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{ExactReal, Rational};

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary precision needed to carry `digits` decimal digits, rounded up to whole words.
pub fn bits_for_digits(digits: u32) -> usize {
    let bits = (digits as f64 * LOG2_10).ceil() as usize + 8;
    bits.div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE
}

#[derive(Clone)]
pub struct HighPrecisionValue {
    value: BigFloat,
    digits: u32,
}

pub type Hp = HighPrecisionValue;

impl HighPrecisionValue {
    fn wrap(value: BigFloat, digits: u32) -> Self {
        debug_assert!(
            !value.is_nan(),
            "NaN escaped into a high-precision computation"
        );
        Self { value, digits }
    }

    fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn zero(digits: u32) -> Self {
        Self::wrap(BigFloat::new(bits_for_digits(digits)), digits)
    }

    pub fn from_i64(n: i64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_i64(n, bits_for_digits(digits)), digits)
    }

    pub fn from_bigint(n: &BigInt, digits: u32) -> Self {
        let p = bits_for_digits(digits);
        if n.is_zero() {
            return Self::zero(digits);
        }
        let words = to_words(n.magnitude());
        let e = (words.len() * WORD_BIT_SIZE) as i32;
        let mut v = BigFloat::from_words(&words, Sign::Pos, e);
        v.set_precision(p, RM).expect("precision");
        if n.is_negative() {
            v.inv_sign();
        }
        Self::wrap(v, digits)
    }

    pub fn from_rational(r: &Rational, digits: u32) -> Self {
        let n = Self::from_bigint(r.numer(), digits + 2);
        let d = Self::from_bigint(r.denom(), digits + 2);
        (&n / &d).with_digits(digits)
    }

    pub fn from_exact(x: &ExactReal, digits: u32) -> Self {
        let c = Self::from_rational(x.coeff(), digits + 2);
        if x.radicand().is_one() {
            return c.with_digits(digits);
        }
        let r = Self::from_bigint(x.radicand(), digits + 2).sqrt();
        (&c * &r).with_digits(digits)
    }

    /// Parses a decimal literal (or `p/q`) exactly, then rounds once.
    pub fn from_decimal_str(s: &str, digits: u32) -> Option<Self> {
        crate::exact::parse_rational(s)
            .ok()
            .map(|r| Self::from_rational(&r, digits))
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        let mut v = self.value.clone();
        v.set_precision(bits_for_digits(digits), RM)
            .expect("precision");
        Self::wrap(v, digits)
    }

    /// Exact value of the binary float.
    pub fn to_rational(&self) -> Rational {
        let Some((words, _, sign, e, _)) = self.value.as_raw_parts() else {
            panic!("non-finite value has no rational form");
        };
        let m = from_words(words);
        if m.is_zero() {
            return Rational::zero();
        }
        let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
        let mut r = Rational::from_integer(BigInt::from(m));
        if shift >= 0 {
            r *= Rational::from_integer(BigInt::one() << shift as usize);
        } else {
            r /= Rational::from_integer(BigInt::one() << (-shift) as usize);
        }
        if sign == Sign::Neg {
            -r
        } else {
            r
        }
    }

    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, e, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words.iter().rev().take(2).fold(0f64, |acc, &w| {
            acc * 2f64.powi(WORD_BIT_SIZE as i32) + w as f64
        });
        let used = words.len().min(2) * WORD_BIT_SIZE;
        let v = top * 2f64.powi(e - used as i32);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// `log10 |x|`, good to a few ulps of f64 even when `x` is far outside f64 range.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (words, _, _, e, _) = self.value.as_raw_parts().expect("finite");
        let top = words.iter().rev().take(2).fold(0f64, |acc, &w| {
            acc * 2f64.powi(WORD_BIT_SIZE as i32) + w as f64
        });
        let used = words.len().min(2) * WORD_BIT_SIZE;
        top.log10() + (e as f64 - used as f64) * std::f64::consts::LOG10_2
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.digits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.bits(), RM), self.digits)
    }

    pub fn ln(&self) -> Self {
        let p = self.bits();
        Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), self.digits)
    }

    pub fn exp(&self) -> Self {
        let p = self.bits();
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), self.digits)
    }

    pub fn cos(&self) -> Self {
        let p = self.bits();
        Self::wrap(with_consts(|cc| self.value.cos(p, RM, cc)), self.digits)
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.bits();
        let v = self.value.powi(n.unsigned_abs() as usize, p, RM);
        let v = if n < 0 { v.reciprocal(p, RM) } else { v };
        Self::wrap(v, self.digits)
    }

    /// `x^r` for positive `x` and rational `r`; integer and half-integer exponents avoid logarithms.
    pub fn pow_rational(&self, r: &Rational) -> Self {
        let n = r.numer().to_i64().expect("small exponent");
        let d = r.denom().to_i64().expect("small exponent");
        match d {
            1 => self.powi(n),
            2 => self.sqrt().powi(n),
            _ => {
                let e = Self::from_rational(r, self.digits + 4);
                (&self.with_digits(self.digits + 4).ln() * &e)
                    .exp()
                    .with_digits(self.digits)
            }
        }
    }

    /// Correctly rounded to `sig` significant digits, positional notation.
    pub fn to_decimal_string(&self, sig: u32) -> String {
        format_decimal(&self.to_rational(), sig)
    }
}

fn to_words(m: &BigUint) -> Vec<Word> {
    #[cfg(target_pointer_width = "64")]
    {
        m.to_u64_digits()
    }
    #[cfg(not(target_pointer_width = "64"))]
    {
        m.to_u32_digits()
    }
}

fn from_words(words: &[Word]) -> BigUint {
    #[cfg(target_pointer_width = "64")]
    {
        BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }
    #[cfg(not(target_pointer_width = "64"))]
    {
        BigUint::from_slice(words)
    }
}

/// Decimal rendering of an exact rational, rounded half-even to `sig` significant digits.
pub fn format_decimal(r: &Rational, sig: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1) as i64;
    let neg = r.is_negative();
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    let mut digits = scaled_round(&a, sig - 1 - e);
    if digits.to_string().len() as i64 > sig {
        e += 1;
        digits = scaled_round(&a, sig - 1 - e);
    }
    let s = digits.to_string();
    let body = if (0..40).contains(&e) {
        let int_len = (e + 1) as usize;
        if s.len() <= int_len {
            format!("{}{}", s, "0".repeat(int_len - s.len()))
        } else {
            format!("{}.{}", &s[..int_len], &s[int_len..])
        }
    } else if e < 0 && e > -30 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    } else {
        let (h, t) = s.split_at(1);
        if t.is_empty() {
            format!("{h}e{e}")
        } else {
            format!("{h}.{t}e{e}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn decimal_exponent(a: &Rational) -> i64 {
    let approx = a.numer().bits() as f64 * std::f64::consts::LOG10_2
        - a.denom().bits() as f64 * std::f64::consts::LOG10_2;
    let mut e = approx.floor() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    loop {
        let lo = pow10(&ten, e);
        if a < &lo {
            e -= 1;
            continue;
        }
        if a >= &(&lo * &ten) {
            e += 1;
            continue;
        }
        return e;
    }
}

fn pow10(ten: &Rational, e: i64) -> Rational {
    let p = ten.pow(e.unsigned_abs() as i32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn scaled_round(a: &Rational, shift: i64) -> BigInt {
    let ten = Rational::from_integer(BigInt::from(10));
    let scaled = a * pow10(&ten, shift);
    let (q, rem): (BigInt, BigInt) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(scaled.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl fmt::Debug for HighPrecisionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}d]",
            self.to_decimal_string(self.digits.min(40)),
            self.digits
        )
    }
}

impl fmt::Display for HighPrecisionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.digits))
    }
}

impl PartialEq for HighPrecisionValue {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for HighPrecisionValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&HighPrecisionValue> for &HighPrecisionValue {
            type Output = HighPrecisionValue;
            fn $method(self, rhs: &HighPrecisionValue) -> HighPrecisionValue {
                let digits = self.digits.max(rhs.digits);
                HighPrecisionValue::wrap(
                    self.value.$method(&rhs.value, bits_for_digits(digits), RM),
                    digits,
                )
            }
        }
        impl $tr<HighPrecisionValue> for HighPrecisionValue {
            type Output = HighPrecisionValue;
            fn $method(self, rhs: HighPrecisionValue) -> HighPrecisionValue {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HighPrecisionValue> for HighPrecisionValue {
            type Output = HighPrecisionValue;
            fn $method(self, rhs: &HighPrecisionValue) -> HighPrecisionValue {
                (&self).$method(rhs)
            }
        }
        impl $tr<HighPrecisionValue> for &HighPrecisionValue {
            type Output = HighPrecisionValue;
            fn $method(self, rhs: HighPrecisionValue) -> HighPrecisionValue {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &HighPrecisionValue {
    type Output = HighPrecisionValue;
    fn neg(self) -> HighPrecisionValue {
        HighPrecisionValue::wrap(BigFloat::neg(&self.value), self.digits)
    }
}

impl Neg for HighPrecisionValue {
    type Output = HighPrecisionValue;
    fn neg(self) -> HighPrecisionValue {
        -&self
    }
}

/// Number of leading significant digits on which `a` and `b` agree, `floor(-log10 |a-b|/|b|)`.
pub fn agreement_digits(a: &Hp, b: &Hp) -> i64 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return a.digits().min(b.digits()) as i64;
    }
    if b.is_zero() {
        return (-diff.log10_abs()).floor() as i64;
    }
    (b.log10_abs() - diff.log10_abs()).floor() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, ratio};

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        for s in ["1/2", "-3/8", "12345", "1/1024", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(Hp::from_rational(&r, 30).to_rational(), r, "{s}");
        }
    }

    #[test]
    fn third_is_correctly_rounded() {
        let t = Hp::from_rational(&ratio(1, 3), 40);
        assert_eq!(t.to_decimal_string(30), "0.333333333333333333333333333333");
        let err = (t.to_rational() - ratio(1, 3)).abs();
        assert!(err < ratio(1, 10).pow(42));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_decimal(&ratio(1, 8), 5), "0.12500");
        assert_eq!(format_decimal(&ratio(2455, 100), 3), "24.6");
        assert_eq!(format_decimal(&ratio(-7, 1), 3), "-7.00");
        assert_eq!(format_decimal(&ratio(99999, 100000), 3), "1.00");
        assert_eq!(
            format_decimal(&ratio(1, 1_000_000_000), 2).as_str(),
            "0.0000000010"
        );
    }

    #[test]
    fn transcendental_functions() {
        let two = Hp::from_i64(2, 50);
        assert_eq!(
            two.ln().to_decimal_string(30),
            "0.693147180559945309417232121458"
        );
        assert_eq!(
            two.sqrt().to_decimal_string(30),
            "1.41421356237309504880168872421"
        );
        let one = Hp::from_i64(1, 50);
        assert_eq!(one.exp().to_decimal_string(20), "2.7182818284590452354");
        assert_eq!(one.cos().to_decimal_string(20), "0.54030230586813971740");
        let c = Hp::from_rational(&ratio(3, 2), 50).pow_rational(&ratio(1, 3));
        assert_eq!(c.to_decimal_string(20), "1.1447142425533318678");
        assert!((two.log10_abs() - 2f64.log10()).abs() < 1e-12);
        assert_eq!(two.to_f64(), 2.0);
    }

    #[test]
    fn surd_starting_values() {
        let x: ExactReal = "1/sqrt(3)".parse().unwrap();
        let v = Hp::from_exact(&x, 40);
        assert_eq!(v.to_decimal_string(25), "0.5773502691896257645091488");
    }
}
