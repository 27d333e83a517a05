//! Truncated asymptotic series `sum Q(C) ln(k)^m k^(-alpha)` with exact coefficients.
//!
//! A series carries a truncation order `N`: every term with `alpha <= N` is
//! known exactly and everything beyond `N` is unknown. The algebra propagates
//! truncation so that no operation ever reports a coefficient it cannot know.

mod coeff;
pub mod matching;
pub mod render;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{binomial, fmt_rational, rational_pow, Rational};
use crate::precision::Hp;

pub use coeff::CoeffPoly;
pub use matching::{
    first_disagreement, match_coefficients, residual, verify, Ansatz, AnsatzSlot,
    FunctionalEquation, MatchError, Suspect, VerifyReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("leading term must be a constant multiple of a pure power of k")]
    NonMonomialLead,
    #[error("{base}^({exp}) is irrational")]
    IrrationalPower { base: String, exp: String },
    #[error("composition needs an inner series tending to zero (lowest order {0})")]
    CompositionUndefined(String),
    #[error("coefficient list too short: need f_{0}")]
    TaylorTooShort(usize),
}

/// `ln(k)^ln_power * k^(-alpha)`. Ordered by `alpha` ascending, then `ln_power` descending,
/// i.e. from the largest scale to the smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub alpha: Rational,
    pub ln_power: u32,
}

impl TermKey {
    pub fn new(alpha: Rational, ln_power: u32) -> Self {
        Self { alpha, ln_power }
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alpha
            .cmp(&other.alpha)
            .then(other.ln_power.cmp(&self.ln_power))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticSeries {
    terms: BTreeMap<TermKey, CoeffPoly>,
    trunc: Rational,
}

impl AsymptoticSeries {
    /// The zero series, known through `trunc`.
    pub fn zero(trunc: Rational) -> Self {
        Self {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn monomial(coeff: CoeffPoly, alpha: Rational, ln_power: u32, trunc: Rational) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(TermKey::new(alpha, ln_power), coeff);
        s
    }

    /// Collects terms, summing duplicates; terms beyond `trunc` are dropped.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (TermKey, CoeffPoly)>,
        trunc: Rational,
    ) -> Self {
        let mut s = Self::zero(trunc);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    fn add_term(&mut self, key: TermKey, c: CoeffPoly) {
        if c.is_zero() || key.alpha > self.trunc {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn truncation(&self) -> &Rational {
        &self.trunc
    }

    /// Same terms, truncation set to `trunc`; terms beyond it are dropped.
    ///
    /// Raising the truncation asserts that the missing orders are exactly zero.
    pub fn with_truncation(&self, trunc: Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.alpha <= trunc)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            trunc,
        }
    }

    /// Lowers the truncation to `min(trunc, current)`.
    pub fn truncate(&self, trunc: &Rational) -> Self {
        self.with_truncation(trunc.min(&self.trunc).clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, alpha: &Rational, ln_power: u32) -> CoeffPoly {
        self.terms
            .get(&TermKey::new(alpha.clone(), ln_power))
            .cloned()
            .unwrap_or_default()
    }

    pub fn first_key(&self) -> Option<&TermKey> {
        self.terms.keys().next()
    }

    /// Smallest `alpha` carrying a nonzero term, or the truncation order when there is none.
    pub fn lead_alpha(&self) -> Rational {
        self.first_key()
            .map(|k| k.alpha.clone())
            .unwrap_or_else(|| self.trunc.clone())
    }

    /// Distinct exponents in increasing order.
    pub fn alphas(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.terms.keys().map(|k| k.alpha.clone()).collect();
        v.dedup();
        v
    }

    pub fn max_ln_power(&self) -> u32 {
        self.terms.keys().map(|k| k.ln_power).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn map_coeffs(&self, f: impl Fn(&CoeffPoly) -> CoeffPoly) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(k, c)| (k.clone(), f(c))),
            self.trunc.clone(),
        )
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn scale_poly(&self, p: &CoeffPoly) -> Self {
        self.map_coeffs(|c| c * p)
    }

    /// Substitutes `C -> p(C)` in every coefficient.
    pub fn substitute(&self, p: &CoeffPoly) -> Self {
        self.map_coeffs(|c| c.compose(p))
    }

    /// Multiplies by `k^(-beta)`; exponents and truncation move together.
    pub fn mul_power(&self, beta: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (TermKey::new(&k.alpha + beta, k.ln_power), c.clone()))
                .collect(),
            trunc: &self.trunc + beta,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.clone().min(other.trunc.clone());
        let mut s = self.with_truncation(trunc);
        for (k, c) in &other.terms {
            s.add_term(k.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product truncation: `min(N_A + lead_B, N_B + lead_A)`.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = (&self.trunc + other.lead_alpha()).min(&other.trunc + self.lead_alpha());
        self.mul_within(other, trunc)
    }

    /// Product with terms beyond `limit` skipped; the truncation is `min(limit, natural)`.
    pub fn mul_within(&self, other: &Self, limit: Rational) -> Self {
        let natural = (&self.trunc + other.lead_alpha()).min(&other.trunc + self.lead_alpha());
        let trunc = natural.min(limit);
        let mut acc: BTreeMap<TermKey, CoeffPoly> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let alpha = &ka.alpha + &kb.alpha;
                if alpha > trunc {
                    // terms of `other` are sorted by alpha, so the rest are out of range too
                    break;
                }
                let key = TermKey::new(alpha, ka.ln_power + kb.ln_power);
                let prod = ca * cb;
                match acc.get_mut(&key) {
                    Some(v) => *v = &*v + &prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Self::from_terms(acc, trunc)
    }

    pub fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(&self.trunc - self.lead_alpha());
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.mul(self);
        }
        out
    }

    /// The constant series `1`, known through `trunc`.
    pub fn one(trunc: Rational) -> Self {
        Self::monomial(
            CoeffPoly::constant(Rational::one()),
            Rational::zero(),
            0,
            trunc,
        )
    }

    /// `S(k+1)` re-expanded in `k`, through the same truncation order.
    pub fn shift_k(&self) -> Self {
        self.shift_through(self.trunc.clone())
    }

    /// `S(k+1) - S(k)`, known through `N + 1`.
    pub fn difference(&self) -> Self {
        let out = &self.trunc + Rational::one();
        let shifted = self.shift_through(out.clone());
        let mut d = shifted;
        for (k, c) in &self.terms {
            d.add_term(k.clone(), -c);
        }
        d
    }

    fn shift_through(&self, out: Rational) -> Self {
        let mut s = Self::zero(out.clone());
        let max_depth = self
            .terms
            .keys()
            .map(|k| floor_nonneg(&(&out - &k.alpha)))
            .max()
            .unwrap_or(0);
        let eps_pows = mercator_powers(self.max_ln_power() as usize, max_depth);
        for (k, c) in &self.terms {
            let depth = floor_nonneg(&(&out - &k.alpha));
            let binom: Vec<Rational> = (0..=depth).map(|j| binomial(&-&k.alpha, j)).collect();
            let m = k.ln_power as usize;
            for (i, eps_i) in eps_pows.iter().enumerate().take(m + 1) {
                let choose = binomial(&Rational::from_integer(BigInt::from(m)), i);
                let series = convolve(eps_i, &binom, depth);
                for (j, v) in series.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let key = TermKey::new(
                        &k.alpha + Rational::from_integer(BigInt::from(j)),
                        (m - i) as u32,
                    );
                    s.add_term(key, c.scale(&(v * &choose)));
                }
            }
        }
        s
    }

    /// Splits `S = a k^(-alpha0) (1 + u)` and returns `(a, alpha0, u)`.
    pub fn factor_lead(&self) -> Result<(Rational, Rational, Self), SeriesError> {
        let key = self.first_key().ok_or(SeriesError::NonMonomialLead)?;
        if key.ln_power != 0 {
            return Err(SeriesError::NonMonomialLead);
        }
        let a = self.terms[key]
            .as_constant()
            .ok_or(SeriesError::NonMonomialLead)?;
        let alpha0 = key.alpha.clone();
        let inv = a.recip();
        let mut u = Self::zero(&self.trunc - &alpha0);
        for (k, c) in self.terms.iter().skip(1) {
            u.add_term(TermKey::new(&k.alpha - &alpha0, k.ln_power), c.scale(&inv));
        }
        Ok((a, alpha0, u))
    }

    /// `(S / lead)^rho = (1 + u)^rho`, known through `N - alpha0`.
    pub fn normalized_power(&self, rho: &Rational) -> Result<Self, SeriesError> {
        let (_, _, u) = self.factor_lead()?;
        let mut t = u.compose_taylor(|j| binomial(rho, j))?;
        t.add_term(
            TermKey::new(Rational::zero(), 0),
            CoeffPoly::constant(Rational::one()),
        );
        Ok(t)
    }

    /// `S^rho = a^rho k^(-rho alpha0) (1 + u)^rho`; `a^rho` must be rational.
    pub fn pow(&self, rho: &Rational) -> Result<Self, SeriesError> {
        let (a, alpha0, _) = self.factor_lead()?;
        let ar = rational_pow(&a, rho).ok_or_else(|| SeriesError::IrrationalPower {
            base: fmt_rational(&a),
            exp: fmt_rational(rho),
        })?;
        Ok(self
            .normalized_power(rho)?
            .scale(&ar)
            .mul_power(&(rho * &alpha0)))
    }

    /// `sum_{j>=1} f(j) u^j` for `u -> 0`.
    ///
    /// Truncation: `N_u + (j_min - 1) lead_u` with `j_min` the first index where `f` is nonzero.
    pub fn compose_taylor(&self, f: impl Fn(usize) -> Rational) -> Result<Self, SeriesError> {
        if self.is_empty() && !self.trunc.is_negative() {
            return Ok(Self::zero(self.trunc.clone()));
        }
        let lead = self.lead_alpha();
        if !lead.is_positive() {
            return Err(SeriesError::CompositionUndefined(fmt_rational(&lead)));
        }
        let max_j = floor_nonneg(&(&self.trunc / &lead)).max(1) + 1;
        let coeffs: Vec<Rational> = (0..=max_j * 2 + 2).map(&f).collect();
        let Some(j_min) = (1..coeffs.len()).find(|&j| !coeffs[j].is_zero()) else {
            return Ok(Self::zero(self.trunc.clone()));
        };
        let j_min_r = Rational::from_integer(BigInt::from(j_min as i64 - 1));
        let trunc = &self.trunc + &j_min_r * &lead;
        let mut out = Self::zero(trunc.clone());
        let mut power = self.clone();
        let mut j = 1usize;
        loop {
            let fj = if j < coeffs.len() {
                coeffs[j].clone()
            } else {
                f(j)
            };
            if !fj.is_zero() {
                out = out.add(&power.scale(&fj).with_truncation(trunc.clone()));
            }
            j += 1;
            if Rational::from_integer(BigInt::from(j as i64)) * &lead > trunc {
                break;
            }
            power = power.mul_within(self, trunc.clone());
        }
        Ok(out.with_truncation(trunc))
    }

    /// `f(u) = sum f_j u^j` from an explicit coefficient list, `f_0` included.
    ///
    /// Fails when the list is too short to reach the natural truncation order.
    pub fn compose_analytic(&self, f: &[Rational]) -> Result<Self, SeriesError> {
        let lead = self.lead_alpha();
        if !lead.is_positive() {
            return Err(SeriesError::CompositionUndefined(fmt_rational(&lead)));
        }
        let j_min = (1..f.len()).find(|&j| !f[j].is_zero()).unwrap_or(1);
        let trunc = &self.trunc + Rational::from_integer(BigInt::from(j_min as i64 - 1)) * &lead;
        let need = floor_nonneg(&(&trunc / &lead));
        if f.len() <= need {
            return Err(SeriesError::TaylorTooShort(need));
        }
        let mut t = self.compose_taylor(|j| f.get(j).cloned().unwrap_or_else(Rational::zero))?;
        if let Some(f0) = f.first() {
            t.add_term(
                TermKey::new(Rational::zero(), 0),
                CoeffPoly::constant(f0.clone()),
            );
        }
        Ok(t)
    }

    /// Numeric value at `k` with the symbol `C` set to `c`.
    pub fn eval(&self, k: &Hp, c: &Hp) -> Hp {
        self.eval_with(k, |p| p.eval_hp(c))
    }

    /// Values at `k` collapsed into a polynomial in `C`: entry `i` multiplies `C^i`.
    pub fn collapse(&self, k: &Hp) -> Vec<Hp> {
        let digits = k.digits();
        let ln_k = k.ln();
        let mut out: Vec<Hp> = Vec::new();
        let mut cache: Option<(Rational, Hp)> = None;
        for (key, c) in &self.terms {
            let scale = match &cache {
                Some((a, v)) if a == &key.alpha => v.clone(),
                _ => {
                    let v = power_of_k(k, &ln_k, &key.alpha);
                    cache = Some((key.alpha.clone(), v.clone()));
                    v
                }
            };
            let basis = &ln_k.powi(key.ln_power as i64) * &scale;
            for (i, a) in c.coeffs().iter().enumerate() {
                if out.len() <= i {
                    out.resize(i + 1, Hp::zero(digits));
                }
                out[i] = &out[i] + &(&Hp::from_rational(a, digits) * &basis);
            }
        }
        out
    }

    /// Derivative in `C` evaluated at `k`, `c`.
    pub fn eval_dc(&self, k: &Hp, c: &Hp) -> Hp {
        self.eval_with(k, |p| p.derivative().eval_hp(c))
    }

    fn eval_with(&self, k: &Hp, coeff: impl Fn(&CoeffPoly) -> Hp) -> Hp {
        let digits = k.digits();
        let ln_k = k.ln();
        let mut total = Hp::zero(digits);
        let mut cache: Option<(Rational, Hp)> = None;
        for (key, c) in &self.terms {
            let scale = match &cache {
                Some((a, v)) if a == &key.alpha => v.clone(),
                _ => {
                    let v = power_of_k(k, &ln_k, &key.alpha);
                    cache = Some((key.alpha.clone(), v.clone()));
                    v
                }
            };
            let term = &(&coeff(c) * &ln_k.powi(key.ln_power as i64)) * &scale;
            total = &total + &term;
        }
        total
    }
}

/// `k^(-alpha)`; integer and half-integer exponents avoid the exponential.
fn power_of_k(k: &Hp, ln_k: &Hp, alpha: &Rational) -> Hp {
    let d = alpha.denom().to_i64().unwrap_or(0);
    let n = alpha.numer().to_i64().unwrap_or(0);
    match d {
        1 => k.powi(-n),
        2 => k.sqrt().powi(-n),
        _ => (-(ln_k * &Hp::from_rational(alpha, k.digits()))).exp(),
    }
}

fn floor_nonneg(r: &Rational) -> usize {
    if r.is_negative() {
        0
    } else {
        r.floor().to_integer().to_usize().unwrap_or(0)
    }
}

/// `eps^i` for `eps = ln(1 + 1/k) = sum_{j>=1} (-1)^(j+1) / (j k^j)`, as coefficient lists in `1/k`.
fn mercator_powers(max_i: usize, depth: usize) -> Vec<Vec<Rational>> {
    let eps: Vec<Rational> = (0..=depth)
        .map(|j| {
            if j == 0 {
                Rational::zero()
            } else {
                let v = Rational::new(BigInt::one(), BigInt::from(j));
                if j % 2 == 0 {
                    -v
                } else {
                    v
                }
            }
        })
        .collect();
    let mut pows = vec![{
        let mut one = vec![Rational::zero(); depth + 1];
        one[0] = Rational::one();
        one
    }];
    for i in 1..=max_i {
        let next = convolve(&pows[i - 1], &eps, depth);
        pows.push(next);
    }
    pows
}

fn convolve(a: &[Rational], b: &[Rational], depth: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); depth + 1];
    for (i, x) in a.iter().enumerate().take(depth + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(depth + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}
