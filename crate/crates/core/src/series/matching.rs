//! Matching-coefficient solver for `S(k+1) - S(k) = G(S(k))`.
//!
//! Coefficients are found level by level on the lattice `alpha0 + j`. At a
//! level `alpha`, writing the unknown block as `sum_m a_m ln(k)^m k^(-alpha)`,
//! the residual at order `alpha + 1` is linear and triangular in the `a_m`:
//!
//! ```text
//! row m:   d a_m + (m + 1) a_{m+1} = -R_m,      d = -alpha - g
//! ```
//!
//! where `g k^(-1)` is the linear response of `G` at the leading term. When
//! `d = 0` the level is resonant, the rows fix `a_1, a_2, ...` instead and
//! `a_0` is the free integration constant.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AsymptoticSeries, CoeffPoly, SeriesError, TermKey};
use crate::exact::{fmt_rational, Rational};

/// The increment `G` of a recurrence written as `S(k+1) - S(k) = G(S(k))`.
pub trait FunctionalEquation {
    fn increment(&self, s: &AsymptoticSeries) -> Result<AsymptoticSeries, SeriesError>;
}

impl<F> FunctionalEquation for F
where
    F: Fn(&AsymptoticSeries) -> Result<AsymptoticSeries, SeriesError>,
{
    fn increment(&self, s: &AsymptoticSeries) -> Result<AsymptoticSeries, SeriesError> {
        self(s)
    }
}

/// A term of the ansatz; `value: None` marks an unknown to be solved for.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSlot {
    pub key: TermKey,
    pub value: Option<CoeffPoly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    pub lead: (Rational, Rational),
    /// Value given to the undetermined coefficient at the resonant level.
    pub free_constant: CoeffPoly,
    /// Slots whose values are known in advance; each is checked against the derivation.
    pub known: Vec<AnsatzSlot>,
}

impl Ansatz {
    /// Leading term `coeff * k^(-alpha)`; the free constant is `kappa * C`.
    pub fn new(coeff: Rational, alpha: Rational, kappa: Rational) -> Self {
        Self {
            lead: (coeff, alpha),
            free_constant: CoeffPoly::monomial(kappa, 1),
            known: Vec::new(),
        }
    }

    pub fn with_known(mut self, key: TermKey, value: CoeffPoly) -> Self {
        self.known.push(AnsatzSlot {
            key,
            value: Some(value),
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatchError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("inconsistent at order {order}: residual {coeff} on {key}")]
    Inconsistent {
        order: String,
        key: String,
        coeff: String,
    },
    #[error("no linear response at order {0}; the ansatz scale is wrong")]
    NoLinearResponse(String),
    #[error("known slot {key} is {expected}, derivation gives {derived}")]
    SlotMismatch {
        key: String,
        expected: String,
        derived: String,
    },
    #[error("increment only known through order {have}, need {need}")]
    ShortIncrement { have: String, need: String },
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ln_power {
            0 => write!(f, "k^-{}", fmt_rational(&self.alpha)),
            1 => write!(f, "ln(k) k^-{}", fmt_rational(&self.alpha)),
            m => write!(f, "ln(k)^{m} k^-{}", fmt_rational(&self.alpha)),
        }
    }
}

/// `S(k+1) - S(k) - G(S(k))`.
pub fn residual<E: FunctionalEquation + ?Sized>(
    eq: &E,
    s: &AsymptoticSeries,
) -> Result<AsymptoticSeries, SeriesError> {
    Ok(s.difference().sub(&eq.increment(s)?))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn first_nonzero_below(r: &AsymptoticSeries, bound: &Rational) -> Option<(TermKey, CoeffPoly)> {
    r.terms()
        .find(|(k, _)| &k.alpha < bound)
        .map(|(k, c)| (k.clone(), c.clone()))
}

fn residual_through<E: FunctionalEquation + ?Sized>(
    eq: &E,
    s: &AsymptoticSeries,
    need: &Rational,
) -> Result<AsymptoticSeries, MatchError> {
    let r = residual(eq, s)?;
    if r.truncation() < need {
        return Err(MatchError::ShortIncrement {
            have: fmt_rational(r.truncation()),
            need: fmt_rational(need),
        });
    }
    Ok(r)
}

/// Derives the expansion through `order` (rounded down onto the lattice `alpha0 + j`).
pub fn match_coefficients<E: FunctionalEquation + ?Sized>(
    eq: &E,
    ansatz: &Ansatz,
    order: &Rational,
) -> Result<AsymptoticSeries, MatchError> {
    let (c0, alpha0) = ansatz.lead.clone();
    let mut s =
        AsymptoticSeries::monomial(CoeffPoly::constant(c0), alpha0.clone(), 0, alpha0.clone());
    let one = Rational::one();

    let r = residual_through(eq, &s, &(&alpha0 + &one))?;
    if let Some((key, c)) = r.terms().next() {
        return Err(MatchError::Inconsistent {
            order: fmt_rational(&key.alpha),
            key: key.to_string(),
            coeff: c.to_string(),
        });
    }

    let levels = (order - &alpha0).floor().to_integer();
    let mut d_first: Option<Rational> = None;
    let mut j = BigInt::one();
    while j <= levels {
        let alpha = &alpha0 + Rational::from_integer(j.clone());
        let target = &alpha + &one;
        let base = s.with_truncation(alpha.clone());
        let r = residual_through(eq, &base, &target)?;
        if let Some((key, c)) = first_nonzero_below(&r, &target) {
            return Err(MatchError::Inconsistent {
                order: fmt_rational(&key.alpha),
                key: key.to_string(),
                coeff: c.to_string(),
            });
        }

        let d1 = match &d_first {
            Some(d) => d.clone(),
            None => {
                let probe = base.add(&AsymptoticSeries::monomial(
                    CoeffPoly::constant(one.clone()),
                    alpha.clone(),
                    0,
                    alpha.clone(),
                ));
                let rp = residual_through(eq, &probe, &target)?;
                let diff = rp.sub(&r);
                let mut d = Rational::zero();
                for (key, c) in diff.terms() {
                    if key.alpha > target {
                        break;
                    }
                    let is_row0 = key.alpha == target && key.ln_power == 0;
                    match (is_row0, c.as_constant()) {
                        (true, Some(v)) => d = v,
                        _ => return Err(MatchError::NoLinearResponse(fmt_rational(&alpha))),
                    }
                }
                d_first = Some(d.clone());
                d
            }
        };
        // d(alpha) = -alpha - g, anchored at the first level
        let d = &d1 + &alpha0 + &one - &alpha;

        let rows: Vec<(u32, CoeffPoly)> = r
            .terms()
            .filter(|(k, _)| k.alpha == target)
            .map(|(k, c)| (k.ln_power, c.clone()))
            .collect();
        let top = rows.iter().map(|(m, _)| *m).max();
        let row = |m: u32| {
            rows.iter()
                .find(|(mm, _)| *mm == m)
                .map(|(_, c)| c.clone())
                .unwrap_or_default()
        };

        let mut level: Vec<(u32, CoeffPoly)> = Vec::new();
        if d.is_zero() {
            level.push((0, ansatz.free_constant.clone()));
            if let Some(top) = top {
                for m in 0..=top {
                    let a = (-&row(m)).scale(&int(m as i64 + 1).recip());
                    level.push((m + 1, a));
                }
            }
        } else if let Some(top) = top {
            let inv = d.recip();
            let mut above = CoeffPoly::zero();
            for m in (0..=top).rev() {
                let rhs = &(-&row(m)) - &above.scale(&int(m as i64 + 1));
                let a = rhs.scale(&inv);
                above = a.clone();
                level.push((m, a));
            }
        }

        let mut next = base;
        let block = AsymptoticSeries::from_terms(
            level
                .into_iter()
                .map(|(m, c)| (TermKey::new(alpha.clone(), m), c)),
            alpha.clone(),
        );
        next = next.add(&block);
        for slot in ansatz.known.iter().filter(|sl| sl.key.alpha == alpha) {
            let derived = next.get(&slot.key.alpha, slot.key.ln_power);
            if let Some(v) = &slot.value {
                if v != &derived {
                    return Err(MatchError::SlotMismatch {
                        key: slot.key.to_string(),
                        expected: v.to_string(),
                        derived: derived.to_string(),
                    });
                }
            }
        }
        s = next;
        j += 1;
    }

    let last = s.truncation().clone();
    let target = &last + &one;
    let r = residual_through(eq, &s, &target)?;
    if let Some((key, c)) = r.terms().find(|(k, _)| k.alpha <= target) {
        return Err(MatchError::Inconsistent {
            order: fmt_rational(&key.alpha),
            key: key.to_string(),
            coeff: c.to_string(),
        });
    }
    Ok(s)
}

/// Outcome of checking a stored expansion against its recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub stated_order: Rational,
    /// Lowest level `alpha` whose coefficients fail the recurrence; `None` if none up to `N + 1`.
    pub first_residual_level: Option<Rational>,
    pub offending: Option<Offending>,
    /// Stored coefficient that disagrees with a fresh matching, when one was run.
    pub suspect: Option<Suspect>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suspect {
    pub key: TermKey,
    pub stored: CoeffPoly,
    pub matched: CoeffPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Offending {
    pub key: TermKey,
    pub difference: CoeffPoly,
    pub increment: CoeffPoly,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} stated order {}",
            fmt_rational(&self.stated_order)
        )?;
        match &self.first_residual_level {
            Some(l) => write!(f, ", first residual level {}", fmt_rational(l))?,
            None => write!(f, ", no residual through the checked range")?,
        }
        if let (false, Some(o)) = (self.pass, &self.offending) {
            write!(
                f,
                "; at {}: S(k+1)-S(k) has {}, increment has {}",
                o.key, o.difference, o.increment
            )?;
        }
        if let (false, Some(su)) = (self.pass, &self.suspect) {
            write!(
                f,
                "; stored coefficient of {} is {}, matching gives {}",
                su.key, su.stored, su.matched
            )?;
        }
        Ok(())
    }
}

/// Checks `S` through `order`: the residual is computed with level `N + 1` set to zero,
/// so a correct expansion first fails at level `N + 1`. PASS iff the first failing level exceeds `N`.
pub fn verify<E: FunctionalEquation + ?Sized>(
    eq: &E,
    s: &AsymptoticSeries,
    order: &Rational,
) -> Result<VerifyReport, SeriesError> {
    let one = Rational::one();
    let ext = s.with_truncation(order + &one);
    let diff = ext.difference();
    let inc = eq.increment(&ext)?;
    let r = diff.sub(&inc);
    let first = r.terms().next().map(|(k, _)| k.clone());
    let level = first.as_ref().map(|k| &k.alpha - &one);
    let pass = match &level {
        Some(l) => l > order,
        None => true,
    };
    Ok(VerifyReport {
        stated_order: order.clone(),
        offending: first.map(|key| Offending {
            difference: diff.get(&key.alpha, key.ln_power),
            increment: inc.get(&key.alpha, key.ln_power),
            key,
        }),
        first_residual_level: level,
        suspect: None,
        pass,
    })
}

/// First key, in scale order, at which `stored` and `matched` differ through `order`.
pub fn first_disagreement(
    stored: &AsymptoticSeries,
    matched: &AsymptoticSeries,
    order: &Rational,
) -> Option<Suspect> {
    let mut keys: Vec<TermKey> = stored
        .terms()
        .chain(matched.terms())
        .map(|(k, _)| k.clone())
        .filter(|k| &k.alpha <= order)
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|key| {
        let (a, b) = (
            stored.get(&key.alpha, key.ln_power),
            matched.get(&key.alpha, key.ln_power),
        );
        (a != b).then_some(Suspect {
            key,
            stored: a,
            matched: b,
        })
    })
}
