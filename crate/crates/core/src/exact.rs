//! Exact rational helpers shared by the map catalog and the series engine.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as an exact number: {reason}")]
pub struct ParseExactError {
    pub input: String,
    pub reason: &'static str,
}

fn parse_err(input: &str, reason: &'static str) -> ParseExactError {
    ParseExactError {
        input: input.to_string(),
        reason,
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/3"`, `"0.125"` or `"1.5e-3"` without ever going through binary floating point.
pub fn parse_rational(s: &str) -> Result<Rational, ParseExactError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err(s, "empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(|| parse_err(s, "bad numerator"))?;
        let d = parse_decimal(d.trim()).ok_or_else(|| parse_err(s, "bad denominator"))?;
        if d.is_zero() {
            return Err(parse_err(s, "zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(t).ok_or_else(|| parse_err(s, "not a rational literal"))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all = format!("{whole}{frac}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac.len() as i32;
    let mut r = Rational::from_integer(n);
    if scale >= 0 {
        r *= Rational::from_integer(BigInt::from(10).pow(scale as u32));
    } else {
        r /= Rational::from_integer(BigInt::from(10).pow((-scale) as u32));
    }
    Some(if neg { -r } else { r })
}

/// `p/q` or `p`, the interchange form used by every JSON fixture.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact integer n-th root, if there is one.
pub fn int_root(a: &BigInt, n: u32) -> Option<BigInt> {
    if n == 0 {
        return None;
    }
    if a.is_negative() {
        if n.is_multiple_of(2) {
            return None;
        }
        return int_root(&-a, n).map(|r| -r);
    }
    let r = a.nth_root(n);
    (r.pow(n) == *a).then_some(r)
}

/// `base^exp` when the result is rational.
pub fn rational_pow(base: &Rational, exp: &Rational) -> Option<Rational> {
    let n = exp.numer().to_i64()?;
    let d = exp.denom().to_u32()?;
    let num = int_root(base.numer(), d)?;
    let den = int_root(base.denom(), d)?;
    let root = Rational::new(num, den);
    if root.is_zero() {
        return (n > 0).then(Rational::zero);
    }
    Some(pow_i(&root, n))
}

pub fn pow_i(base: &Rational, n: i64) -> Rational {
    let p = base.pow(n.unsigned_abs() as i32);
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

/// Generalized binomial coefficient `binom(rho, j)`.
pub fn binomial(rho: &Rational, j: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc = acc * (rho - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn floor_to_i64(r: &Rational) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("exponent out of range")
}

/// Real number of the form `coeff * sqrt(radicand)` with a squarefree positive integer radicand.
///
/// Starting values such as `1/sqrt(3)` must be carried exactly, otherwise the
/// orbit starts from a rounded point and the extracted constant shifts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    coeff: Rational,
    radicand: BigInt,
}

impl ExactReal {
    pub fn rational(r: Rational) -> Self {
        Self {
            coeff: r,
            radicand: BigInt::one(),
        }
    }

    /// `coeff * sqrt(under)` normalized so the radicand is a squarefree integer.
    pub fn surd(coeff: Rational, under: &Rational) -> Result<Self, ParseExactError> {
        if under.is_negative() {
            return Err(parse_err(&fmt_rational(under), "negative radicand"));
        }
        if under.is_zero() || coeff.is_zero() {
            return Ok(Self::rational(Rational::zero()));
        }
        // sqrt(n/d) = sqrt(n d) / d
        let mut rad = under.numer() * under.denom();
        let mut outside = Rational::new(BigInt::one(), under.denom().clone());
        let mut f = BigInt::from(2);
        while &f * &f <= rad {
            let sq = &f * &f;
            while (&rad % &sq).is_zero() {
                rad /= &sq;
                outside *= Rational::from_integer(f.clone());
            }
            f += 1;
            if f > BigInt::from(1_000_000) {
                break;
            }
        }
        Ok(Self {
            coeff: coeff * outside,
            radicand: rad,
        })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.radicand.is_one().then_some(&self.coeff)
    }

    /// The exact square, used for domain comparisons.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(self.radicand.clone())
    }

    pub fn sign(&self) -> Sign {
        self.coeff.numer().sign()
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &Rational) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        if let Some(q) = self.as_rational() {
            return q.cmp(r);
        }
        match (self.coeff.is_positive(), r.is_positive()) {
            (true, false) => Greater,
            (false, true) => Less,
            (true, true) => self.square().cmp(&(r * r)),
            (false, false) => (r * r).cmp(&self.square()),
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            return f.write_str(&fmt_rational(&self.coeff));
        }
        if self.coeff.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", fmt_rational(&self.coeff), self.radicand)
        }
    }
}

impl FromStr for ExactReal {
    type Err = ParseExactError;

    /// Accepts a rational literal, `sqrt(r)`, `a*sqrt(r)`, `sqrt(r)/b` and `a/sqrt(r)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(open) = t.find("sqrt(") else {
            return parse_rational(&t).map(Self::rational);
        };
        let close = t[open..]
            .find(')')
            .map(|i| i + open)
            .ok_or_else(|| parse_err(s, "unclosed sqrt("))?;
        let under = parse_rational(&t[open + 5..close])?;
        let before = &t[..open];
        let after = &t[close + 1..];
        let coeff = match before {
            "" => Rational::one(),
            b if b.ends_with('*') => parse_rational(&b[..b.len() - 1])?,
            b if b.ends_with('/') => {
                if !after.is_empty() {
                    return Err(parse_err(s, "unexpected text after sqrt(...)"));
                }
                let a = parse_rational(&b[..b.len() - 1])?;
                // a / sqrt(r) = a * sqrt(1/r)
                if under.is_zero() {
                    return Err(parse_err(s, "division by zero"));
                }
                return Self::surd(a, &under.recip());
            }
            _ => return Err(parse_err(s, "expected '*' or '/' before sqrt(")),
        };
        let coeff = match after {
            "" => coeff,
            a if a.starts_with('/') => coeff / parse_rational(&a[1..])?,
            _ => return Err(parse_err(s, "unexpected text after sqrt(...)")),
        };
        Self::surd(coeff, &under)
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for rationals stored as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("4/9").unwrap(), ratio(4, 9));
        assert_eq!(parse_rational("-1.5e-2").unwrap(), ratio(-3, 200));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_pow(&int(4), &ratio(3, 2)), Some(int(8)));
        assert_eq!(rational_pow(&ratio(1, 8), &ratio(-1, 3)), Some(int(2)));
        assert_eq!(rational_pow(&int(2), &ratio(1, 2)), None);
        assert_eq!(binomial(&ratio(1, 2), 2), ratio(-1, 8));
        assert_eq!(binomial(&int(5), 2), int(10));
    }

    #[test]
    fn surds_normalize_and_round_trip() {
        let a: ExactReal = "1/sqrt(3)".parse().unwrap();
        assert_eq!(a.coeff(), &ratio(1, 3));
        assert_eq!(a.radicand(), &BigInt::from(3));
        assert_eq!(a.square(), ratio(1, 3));
        assert_eq!(a.to_string().parse::<ExactReal>().unwrap(), a);
        let b: ExactReal = "sqrt(8)/3".parse().unwrap();
        assert_eq!(b.to_string(), "2/3*sqrt(2)");
        let c: ExactReal = "sqrt(4)".parse().unwrap();
        assert_eq!(c.as_rational(), Some(&int(2)));
        assert_eq!(a.cmp_rational(&ratio(1, 2)), std::cmp::Ordering::Greater);
        assert_eq!(a.cmp_rational(&ratio(3, 5)), std::cmp::Ordering::Less);
    }
}
