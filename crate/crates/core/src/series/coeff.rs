use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{fmt_rational, Rational};
use crate::precision::Hp;

/// Polynomial in the symbol `C` with exact rational coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffPoly {
    c: Vec<Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_coeffs(vec![r])
    }

    /// The monomial `r * C^n`.
    pub fn monomial(r: Rational, n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = r;
        Self::from_coeffs(c)
    }

    /// `C` itself.
    pub fn symbol() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_coeffs(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.c.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.c.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_hp(&self, x: &Hp) -> Hp {
        let digits = x.digits();
        self.c.iter().rev().fold(Hp::zero(digits), |acc, a| {
            &(&acc * x) + &Hp::from_rational(a, digits)
        })
    }

    /// Substitutes `C -> p(C)`.
    pub fn compose(&self, p: &CoeffPoly) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| {
            &(&acc * p) + &Self::constant(a.clone())
        })
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let n = self.c.len().max(rhs.c.len());
        CoeffPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let n = self.c.len().max(rhs.c.len());
        CoeffPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        if self.is_zero() || rhs.is_zero() {
            return CoeffPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CoeffPoly::from_coeffs(c)
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl From<Rational> for CoeffPoly {
    fn from(r: Rational) -> Self {
        Self::constant(r)
    }
}

/// Highest power first, e.g. `12*C^2 - 12*C + 8`.
impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a < &Rational::zero();
            let mag = if neg { -a } else { a.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let num = fmt_rational(&mag);
            match i {
                0 => f.write_str(&num)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{num}*")?;
                    }
                    f.write_str("C")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn p(c: &[(i64, i64)]) -> CoeffPoly {
        CoeffPoly::from_coeffs(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[(8, 1), (-12, 1), (12, 1)]);
        assert_eq!(a.to_string(), "12*C^2 - 12*C + 8");
        assert_eq!(a.degree(), Some(2));
        let b = p(&[(1, 2), (1, 1)]);
        assert_eq!((&a * &b).to_string(), "12*C^3 - 6*C^2 + 2*C + 4");
        assert!((&a - &a).is_zero());
        assert_eq!(a.eval(&int(1)), int(8));
        assert_eq!(a.derivative().to_string(), "24*C - 12");
        assert_eq!((-&b).to_string(), "-C - 1/2");
        assert_eq!(CoeffPoly::symbol().compose(&b), b);
    }
}
