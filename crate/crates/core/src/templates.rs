//! Stored expansions, the functional equation of every algebraic family, and
//! residual verification of one against the other.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{binomial, fmt_rational, int, parse_rational, ratio, Rational};
use crate::maps::{Family, RecurrenceMap};
use crate::precision::Hp;
use crate::series::render::JsonTerm;
use crate::series::{
    first_disagreement, match_coefficients, verify, Ansatz, AsymptoticSeries, CoeffPoly,
    FunctionalEquation, MatchError, SeriesError, TermKey, VerifyReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("no stored template for {0}; derive one by matching instead")]
    NoTemplate(String),
    #[error("no functional equation for {0}")]
    NoEquation(String),
    #[error("fixture {file}: {msg}")]
    Fixture { file: String, msg: String },
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn fixture_err(file: &str, msg: impl ToString) -> TemplateError {
    TemplateError::Fixture {
        file: file.to_string(),
        msg: msg.to_string(),
    }
}

/// Increment `G` in `S(k+1) - S(k) = G(S(k))` for each algebraic family, written in the
/// normalized variable of [`Normalization`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equation {
    /// `x -> x - x^2`
    LogisticUnit,
    /// `x -> x - x^(3/2)`
    SqrtMap,
    /// `u -> u - u^3/2`
    HalfCubic,
    /// `v -> v cos v`
    CosMap,
    /// `w -> w exp(-w^2/2)`
    GaussExp,
    /// `W -> W / (1 + W^s/s)`, `W = s^(1/s) w`
    Reciprocal { s: Rational },
    /// `X -> X + q^(q-1) X^(1-q)`, `X = q^(1-1/q) x`
    PowerSumX { q: Rational },
    /// `y -> y (1 + 1/y)^q`, `y = x^q`
    PowerSumY { q: Rational },
}

fn odd_taylor(f: impl Fn(usize) -> Rational) -> impl Fn(usize) -> Rational {
    move |n| {
        if n >= 3 && n % 2 == 1 {
            f((n - 1) / 2)
        } else {
            Rational::zero()
        }
    }
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |a, b| a * BigInt::from(b)))
}

impl FunctionalEquation for Equation {
    fn increment(&self, s: &AsymptoticSeries) -> Result<AsymptoticSeries, SeriesError> {
        match self {
            Equation::LogisticUnit => Ok(s.mul(s).neg()),
            Equation::SqrtMap => Ok(s.pow(&ratio(3, 2))?.neg()),
            Equation::HalfCubic => Ok(s.mul(s).mul(s).scale(&ratio(-1, 2))),
            Equation::CosMap => s.compose_taylor(odd_taylor(|j| {
                let v = factorial(2 * j).recip();
                if j % 2 == 1 {
                    -v
                } else {
                    v
                }
            })),
            Equation::GaussExp => s.compose_taylor(odd_taylor(|j| {
                let h = ratio(-1, 2);
                crate::exact::pow_i(&h, j as i64) / factorial(j)
            })),
            Equation::Reciprocal { s: e } => {
                let v = s.pow(e)?.scale(&e.recip());
                let h = v.compose_taylor(|j| if j % 2 == 0 { int(1) } else { int(-1) })?;
                Ok(s.mul(&h))
            }
            Equation::PowerSumX { q } => {
                let r = q.recip();
                Ok(s.normalized_power(&(int(1) - q))?.mul_power(&(int(1) - r)))
            }
            Equation::PowerSumY { q } => {
                let v = s
                    .normalized_power(&int(-1))?
                    .scale(&q.recip())
                    .mul_power(&int(1));
                let h = v.compose_taylor(|j| binomial(q, j))?;
                Ok(s.mul(&h))
            }
        }
    }
}

impl Equation {
    /// Leading term and the coefficient `kappa` of the free constant.
    pub fn ansatz(&self) -> Ansatz {
        match self {
            Equation::LogisticUnit => Ansatz::new(int(1), int(1), int(-1)),
            Equation::SqrtMap => Ansatz::new(int(4), int(2), int(-8)),
            Equation::HalfCubic | Equation::CosMap | Equation::GaussExp => {
                Ansatz::new(int(1), ratio(1, 2), ratio(-1, 2))
            }
            Equation::Reciprocal { s } => Ansatz::new(int(1), s.recip(), -s.recip()),
            Equation::PowerSumX { q } => Ansatz::new(q.clone(), -q.recip(), q.recip()),
            Equation::PowerSumY { q } => Ansatz::new(q.clone(), int(-1), int(1)),
        }
    }

    pub fn formula(&self) -> String {
        match self {
            Equation::LogisticUnit => "S(k+1) = S - S^2".into(),
            Equation::SqrtMap => "S(k+1) = S - S^(3/2)".into(),
            Equation::HalfCubic => "S(k+1) = S - S^3/2".into(),
            Equation::CosMap => "S(k+1) = S cos S".into(),
            Equation::GaussExp => "S(k+1) = S exp(-S^2/2)".into(),
            Equation::Reciprocal { s } => {
                let s = grouped(s);
                format!("S(k+1) = S / (1 + S^{s}/{s})")
            }
            Equation::PowerSumX { q } => format!(
                "S(k+1) = S + {}^{} S^{}",
                grouped(q),
                grouped(&(q - int(1))),
                grouped(&(int(1) - q))
            ),
            Equation::PowerSumY { q } => format!("S(k+1) = S (1 + 1/S)^{}", grouped(q)),
        }
    }
}

/// `r` as an exponent or base: integers bare, everything else parenthesized.
fn grouped(r: &Rational) -> String {
    if r.is_integer() && *r >= Rational::zero() {
        fmt_rational(r)
    } else {
        format!("({})", fmt_rational(r))
    }
}

/// The normalized variable is `base^exp * x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub base: Rational,
    pub exp: Rational,
}

impl Normalization {
    pub fn identity() -> Self {
        Self {
            base: int(1),
            exp: int(1),
        }
    }

    pub fn factor(&self, digits: u32) -> Hp {
        if self.base.is_one() {
            return Hp::from_i64(1, digits);
        }
        Hp::from_rational(&self.base, digits).pow_rational(&self.exp)
    }

    pub fn describe(&self) -> String {
        if self.base.is_one() {
            "x".into()
        } else {
            format!("{}^{} x", grouped(&self.base), grouped(&self.exp))
        }
    }
}

/// Equation and normalization of an algebraic-decay or algebraic-growth map.
pub fn equation_for(map: &RecurrenceMap) -> Option<(Equation, Normalization)> {
    let id = Normalization::identity();
    Some(match map.family() {
        Family::Logistic if map.p().is_some_and(|p| p.is_one()) => (Equation::LogisticUnit, id),
        Family::SqrtMap => (Equation::SqrtMap, id),
        Family::HalfCubic => (Equation::HalfCubic, id),
        Family::CubicMap => (
            Equation::HalfCubic,
            Normalization {
                base: int(2),
                exp: ratio(1, 2),
            },
        ),
        Family::CosMap => (Equation::CosMap, id),
        Family::GaussExp => (Equation::GaussExp, id),
        Family::Reciprocal => {
            let s = map.s()?.clone();
            let exp = s.recip();
            (
                Equation::Reciprocal { s: s.clone() },
                Normalization { base: s, exp },
            )
        }
        Family::PowerSum => {
            let q = map.q()?.clone();
            let exp = int(1) - q.recip();
            (
                Equation::PowerSumX { q: q.clone() },
                Normalization { base: q, exp },
            )
        }
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Quoted from a reference table.
    Fixture,
    /// Produced here by coefficient matching.
    Derived,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTemplate {
    pub family: Family,
    pub params: Vec<(String, String)>,
    pub equation: Equation,
    pub normalization: Normalization,
    pub series: AsymptoticSeries,
    pub order: Rational,
    pub provenance: Provenance,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureTerm {
    alpha: String,
    ln_power: u32,
    coeff_poly: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureFile {
    family: String,
    #[serde(default)]
    params: BTreeMap<String, String>,
    #[serde(default)]
    variable: String,
    truncation_order: String,
    terms: Vec<FixtureTerm>,
    provenance: String,
}

/// The fixture files, either compiled in or read from a directory.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    files: BTreeMap<String, String>,
}

const BUILTIN: &[(&str, &str)] = &[
    ("sqrt-map.json", include_str!("../fixtures/sqrt-map.json")),
    (
        "sqrt-map-tables.json",
        include_str!("../fixtures/sqrt-map-tables.json"),
    ),
    (
        "power-sum-q2.json",
        include_str!("../fixtures/power-sum-q2.json"),
    ),
    (
        "power-sum-q3.json",
        include_str!("../fixtures/power-sum-q3.json"),
    ),
    (
        "power-sum-q3-2.json",
        include_str!("../fixtures/power-sum-q3-2.json"),
    ),
    (
        "power-sum-general.json",
        include_str!("../fixtures/power-sum-general.json"),
    ),
    (
        "reciprocal-limits.json",
        include_str!("../fixtures/reciprocal-limits.json"),
    ),
    (
        "derived-constants.json",
        include_str!("../fixtures/derived-constants.json"),
    ),
];

impl FixtureSet {
    pub fn builtin() -> Self {
        Self {
            files: BUILTIN
                .iter()
                .map(|(n, c)| (n.to_string(), c.to_string()))
                .collect(),
        }
    }

    /// Built-in set with every same-named file in `dir` taking precedence.
    pub fn with_overrides(dir: &Path) -> std::io::Result<Self> {
        let mut set = Self::builtin();
        for name in BUILTIN.iter().map(|(n, _)| *n) {
            let p = dir.join(name);
            if p.exists() {
                set.files
                    .insert(name.to_string(), std::fs::read_to_string(p)?);
            }
        }
        Ok(set)
    }

    pub fn raw(&self, name: &str) -> Result<&str, TemplateError> {
        self.files
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| fixture_err(name, "missing"))
    }

    fn json<T: for<'de> Deserialize<'de>>(&self, name: &str) -> Result<T, TemplateError> {
        serde_json::from_str(self.raw(name)?).map_err(|e| fixture_err(name, e))
    }

    fn series_file(
        &self,
        name: &str,
    ) -> Result<(AsymptoticSeries, Rational, String), TemplateError> {
        let f: FixtureFile = self.json(name)?;
        let order = parse_rational(&f.truncation_order).map_err(|e| fixture_err(name, e))?;
        let terms: Vec<JsonTerm> = f
            .terms
            .iter()
            .map(|t| JsonTerm {
                alpha: t.alpha.clone(),
                ln_power: t.ln_power,
                coeff: t.coeff_poly.clone(),
            })
            .collect();
        let s = crate::series::render::from_json_terms(&terms, order.clone())
            .map_err(|e| fixture_err(name, e))?;
        Ok((s, order, f.provenance))
    }

    fn file_for(map: &RecurrenceMap) -> Option<&'static str> {
        match map.family() {
            Family::SqrtMap => Some("sqrt-map.json"),
            Family::PowerSum => {
                let q = map.q()?;
                if *q == int(2) {
                    Some("power-sum-q2.json")
                } else if *q == int(3) {
                    Some("power-sum-q3.json")
                } else if *q == ratio(3, 2) {
                    Some("power-sum-q3-2.json")
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The stored expansion for `map`.
    pub fn template_for(&self, map: &RecurrenceMap) -> Result<ExpansionTemplate, TemplateError> {
        let name =
            Self::file_for(map).ok_or_else(|| TemplateError::NoTemplate(map.spec().to_string()))?;
        let (equation, normalization) = equation_for(map).expect("templated maps have equations");
        let (series, order, note) = self.series_file(name)?;
        Ok(ExpansionTemplate {
            family: map.family(),
            params: params_of(map),
            equation,
            normalization,
            series,
            order,
            provenance: Provenance::Fixture,
            note,
        })
    }

    pub fn sqrt_map_tables(&self) -> Result<SqrtMapTables, TemplateError> {
        let raw: RawTables = self.json("sqrt-map-tables.json")?;
        let name = "sqrt-map-tables.json";
        let list = |v: &[String]| -> Result<Vec<Rational>, TemplateError> {
            v.iter()
                .map(|s| parse_rational(s).map_err(|e| fixture_err(name, e)))
                .collect()
        };
        let polys =
            |m: &BTreeMap<String, Vec<String>>| -> Result<BTreeMap<u32, CoeffPoly>, TemplateError> {
                m.iter()
                    .map(|(k, v)| {
                        let idx: u32 = k.parse().map_err(|e| fixture_err(name, e))?;
                        Ok((idx, CoeffPoly::from_coeffs(list(v)?)))
                    })
                    .collect()
            };
        Ok(SqrtMapTables {
            tau: parse_rational(&raw.tau).map_err(|e| fixture_err(name, e))?,
            lambda: parse_rational(&raw.lambda).map_err(|e| fixture_err(name, e))?,
            a_m: list(&raw.a_m)?,
            b_j: list(&raw.b_j)?,
            a_0j: list(&raw.a_0j)?,
            c_i: list(&raw.c_i)?,
            t: polys(&raw.t)?,
            p: polys(&raw.p)?,
        })
    }

    pub fn power_sum_general(&self) -> Result<GeneralPowerSum, TemplateError> {
        let name = "power-sum-general.json";
        let raw: RawGeneral = self.json(name)?;
        let mut terms = Vec::new();
        for t in raw.terms {
            let mut entries = Vec::new();
            for e in t.coeff {
                entries.push((
                    e.c_power,
                    e.w_power,
                    parse_rational(&e.value).map_err(|x| fixture_err(name, x))?,
                ));
            }
            terms.push((t.j, t.ln_power, entries));
        }
        Ok(GeneralPowerSum { terms })
    }

    pub fn reciprocal_limits(&self) -> Result<Vec<ReciprocalLimit>, TemplateError> {
        let name = "reciprocal-limits.json";
        let raw: RawLimits = self.json(name)?;
        raw.limits
            .into_iter()
            .map(|l| {
                let p = |s: &str| parse_rational(s).map_err(|e| fixture_err(name, e));
                Ok(ReciprocalLimit {
                    s: p(&l.s)?,
                    lead_alpha: p(&l.lead_alpha)?,
                    limit_alpha: p(&l.limit_alpha)?,
                    ln_coeff: p(&l.ln_coeff)?,
                    limit: p(&l.limit)?,
                    constant: l.constant,
                    name: l.name,
                })
            })
            .collect()
    }

    /// Values recorded for constants that have no reference value.
    pub fn derived_constants(&self) -> Result<Vec<DerivedConstant>, TemplateError> {
        let raw: RawDerived = self.json("derived-constants.json")?;
        Ok(raw.constants)
    }
}

fn params_of(map: &RecurrenceMap) -> Vec<(String, String)> {
    map.spec()
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// The stored expansion from the built-in fixtures.
pub fn template_for(map: &RecurrenceMap) -> Result<ExpansionTemplate, TemplateError> {
    FixtureSet::builtin().template_for(map)
}

/// Expansion through `order` by coefficient matching.
pub fn derive_expansion(
    map: &RecurrenceMap,
    order: &Rational,
) -> Result<ExpansionTemplate, TemplateError> {
    let (equation, normalization) =
        equation_for(map).ok_or_else(|| TemplateError::NoEquation(map.spec().to_string()))?;
    let series = match_coefficients(&equation, &equation.ansatz(), order)?;
    let order = series.truncation().clone();
    Ok(ExpansionTemplate {
        family: map.family(),
        params: params_of(map),
        equation,
        normalization,
        series,
        order,
        provenance: Provenance::Derived,
        note: "derived (no reference fixture)".into(),
    })
}

/// Residual check of `template` against the recurrence of its map.
pub fn verify_template(
    template: &ExpansionTemplate,
    order: &Rational,
) -> Result<VerifyReport, TemplateError> {
    let mut report = verify(&template.equation, &template.series, order)?;
    if !report.pass {
        let eq = &template.equation;
        if let Ok(matched) = match_coefficients(eq, &eq.ansatz(), order) {
            report.suspect = first_disagreement(&template.series, &matched, order);
        }
    }
    Ok(report)
}

#[derive(Debug, Deserialize)]
struct RawTables {
    tau: String,
    lambda: String,
    a_m: Vec<String>,
    b_j: Vec<String>,
    a_0j: Vec<String>,
    c_i: Vec<String>,
    #[serde(rename = "T")]
    t: BTreeMap<String, Vec<String>>,
    #[serde(rename = "P")]
    p: BTreeMap<String, Vec<String>>,
}

/// Coefficient tables of the `x -> x(1 - sqrt x)` expansion; `T_m`, `P_m` are polynomials in `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtMapTables {
    pub tau: Rational,
    pub lambda: Rational,
    pub a_m: Vec<Rational>,
    pub b_j: Vec<Rational>,
    pub a_0j: Vec<Rational>,
    pub c_i: Vec<Rational>,
    pub t: BTreeMap<u32, CoeffPoly>,
    pub p: BTreeMap<u32, CoeffPoly>,
}

impl SqrtMapTables {
    /// `P_1(X) = X`, which the printed tables leave implicit.
    pub fn p_poly(&self, m: u32) -> Option<CoeffPoly> {
        if m == 1 {
            return Some(CoeffPoly::symbol());
        }
        self.p.get(&m).cloned()
    }

    /// `(lambda/k)^(1/tau) {1 + sum_m P_m(X)/k^m}` with `X = -(1/tau)(b_1 ln k + C)`,
    /// expanded in the ordinary scale through `(lambda/k)^(1/tau) / k^max_m`.
    pub fn p_form_series(&self, max_m: u32) -> AsymptoticSeries {
        let inv_tau = self.tau.recip();
        let lead_alpha = inv_tau.clone();
        let lead = crate::exact::rational_pow(&self.lambda, &inv_tau).expect("rational lead");
        let trunc = &lead_alpha + Rational::from_integer(BigInt::from(max_m));
        // X = x1 ln k + x0 C
        let x1 = -(&inv_tau * &self.b_j[0]);
        let x0 = -inv_tau.clone();
        let mut terms = vec![(
            TermKey::new(lead_alpha.clone(), 0),
            CoeffPoly::constant(lead.clone()),
        )];
        for m in 1..=max_m {
            let Some(p) = self.p_poly(m) else { break };
            let alpha = &lead_alpha + Rational::from_integer(BigInt::from(m));
            // P(x1 L + x0 C) = sum_i p_i (x1 L + x0 C)^i; expand binomially in L
            for (i, pi) in p.coeffs().iter().enumerate() {
                for l in 0..=i {
                    let choose = binomial(&Rational::from_integer(BigInt::from(i)), l);
                    let coeff = pi
                        * &choose
                        * crate::exact::pow_i(&x1, l as i64)
                        * crate::exact::pow_i(&x0, (i - l) as i64)
                        * &lead;
                    terms.push((
                        TermKey::new(alpha.clone(), l as u32),
                        CoeffPoly::monomial(coeff, i - l),
                    ));
                }
            }
        }
        AsymptoticSeries::from_terms(terms, trunc)
    }
}

#[derive(Debug, Deserialize)]
struct RawGeneralEntry {
    c_power: usize,
    w_power: i64,
    value: String,
}

#[derive(Debug, Deserialize)]
struct RawGeneralTerm {
    j: i64,
    ln_power: u32,
    coeff: Vec<RawGeneralEntry>,
}

#[derive(Debug, Deserialize)]
struct RawGeneral {
    terms: Vec<RawGeneralTerm>,
}

/// `(c_power, w_power, value)`.
pub type GeneralPart = (usize, i64, Rational);

/// The power-sum `x`-form for symbolic `q`: terms at `alpha = j - 1/q`, each coefficient a
/// sum of `value * C^c_power * w^w_power` with `w = 1/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralPowerSum {
    pub terms: Vec<(i64, u32, Vec<GeneralPart>)>,
}

impl GeneralPowerSum {
    pub fn specialize(&self, q: &Rational) -> AsymptoticSeries {
        let w = q.recip();
        let max_j = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let trunc = Rational::from_integer(BigInt::from(max_j)) - &w;
        let terms = self.terms.iter().map(|(j, m, entries)| {
            let mut c = CoeffPoly::zero();
            for (cp, wp, v) in entries {
                c = &c + &CoeffPoly::monomial(v * crate::exact::pow_i(&w, *wp), *cp);
            }
            (
                TermKey::new(Rational::from_integer(BigInt::from(*j)) - &w, *m),
                c,
            )
        });
        AsymptoticSeries::from_terms(terms, trunc)
    }
}

#[derive(Debug, Deserialize)]
struct RawLimit {
    s: String,
    lead_alpha: String,
    limit_alpha: String,
    ln_coeff: String,
    limit: String,
    constant: String,
    name: String,
}

#[derive(Debug, Deserialize)]
struct RawLimits {
    limits: Vec<RawLimit>,
}

/// `-lim k^limit_alpha (W_k - k^-lead_alpha + ln_coeff ln(k)/k^limit_alpha) = limit * constant`
/// for the normalized reciprocal orbit `W = s^(1/s) w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalLimit {
    pub s: Rational,
    pub lead_alpha: Rational,
    pub limit_alpha: Rational,
    pub ln_coeff: Rational,
    pub limit: Rational,
    pub constant: String,
    pub name: String,
}

impl ReciprocalLimit {
    /// The expansion prefix the limit subtracts, with the constant as the symbol `C`:
    /// `k^-lead - ln_coeff ln(k)/k^limit_alpha - limit C / k^limit_alpha`.
    pub fn as_series(&self) -> AsymptoticSeries {
        AsymptoticSeries::from_terms(
            [
                (
                    TermKey::new(self.lead_alpha.clone(), 0),
                    CoeffPoly::constant(int(1)),
                ),
                (
                    TermKey::new(self.limit_alpha.clone(), 1),
                    CoeffPoly::constant(-&self.ln_coeff),
                ),
                (
                    TermKey::new(self.limit_alpha.clone(), 0),
                    CoeffPoly::monomial(-&self.limit, 1),
                ),
            ],
            self.limit_alpha.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstant {
    pub map: String,
    pub name: String,
    pub value: String,
    pub digits: u32,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
struct RawDerived {
    constants: Vec<DerivedConstant>,
}

/// Coefficients of `y_k ~ alpha k + beta ln k + C + gamma ln(k)/k + delta/k`, `y = x^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumCoeffs {
    pub q: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: CoeffPoly,
}

pub fn power_sum_coeffs(q: &Rational) -> PowerSumCoeffs {
    let iq = q.recip();
    let half = ratio(1, 2);
    let alpha = q.clone();
    let beta = (q - int(1)) * &half;
    let gamma = &iq * ratio(1, 4) - &half + q * ratio(1, 4);
    let delta = CoeffPoly::from_coeffs(vec![
        -(&iq * ratio(1, 12)) + ratio(1, 4) - q * ratio(1, 6),
        -(&iq * &half) + &half,
    ]);
    PowerSumCoeffs {
        q: q.clone(),
        alpha,
        beta,
        gamma,
        delta,
    }
}

impl PowerSumCoeffs {
    pub fn y_series(&self) -> AsymptoticSeries {
        AsymptoticSeries::from_terms(
            [
                (
                    TermKey::new(int(-1), 0),
                    CoeffPoly::constant(self.alpha.clone()),
                ),
                (
                    TermKey::new(int(0), 1),
                    CoeffPoly::constant(self.beta.clone()),
                ),
                (TermKey::new(int(0), 0), CoeffPoly::symbol()),
                (
                    TermKey::new(int(1), 1),
                    CoeffPoly::constant(self.gamma.clone()),
                ),
                (TermKey::new(int(1), 0), self.delta.clone()),
            ],
            int(1),
        )
    }

    /// `q^(1-1/q) x = q^(1-1/q) y^(1/q) = q k^(1/q) (y / (q k))^(1/q)`.
    pub fn x_form(&self) -> Result<AsymptoticSeries, SeriesError> {
        let r = self.q.recip();
        Ok(self
            .y_series()
            .normalized_power(&r)?
            .scale(&self.q)
            .mul_power(&-r))
    }
}

/// `true` when every coefficient of `a` is in `b` and vice versa, through `order`.
pub fn same_through(a: &AsymptoticSeries, b: &AsymptoticSeries, order: &Rational) -> bool {
    a.truncate(order).terms().collect::<Vec<_>>() == b.truncate(order).terms().collect::<Vec<_>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::make_map;
    use num_traits::Signed;

    fn map(s: &str) -> RecurrenceMap {
        make_map(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn power_sum_coefficients() {
        let c = power_sum_coeffs(&int(2));
        assert_eq!(
            (c.alpha.clone(), c.beta.clone(), c.gamma.clone()),
            (int(2), ratio(1, 2), ratio(1, 8))
        );
        assert_eq!(
            c.delta,
            CoeffPoly::from_coeffs(vec![ratio(-1, 8), ratio(1, 4)])
        );
        let c = power_sum_coeffs(&int(3));
        assert_eq!(c.gamma, ratio(1, 3));
        assert_eq!(
            c.delta,
            CoeffPoly::from_coeffs(vec![ratio(-5, 18), ratio(1, 3)])
        );
        let c = power_sum_coeffs(&ratio(3, 2));
        assert_eq!(c.beta, ratio(1, 4));
        assert_eq!(c.gamma, ratio(1, 24));
        assert_eq!(
            c.delta,
            CoeffPoly::from_coeffs(vec![ratio(-1, 18), ratio(1, 6)])
        );
    }

    #[test]
    fn lookups() {
        let t = template_for(&map("sqrt-map(x0=1/2)")).unwrap();
        assert_eq!(t.series.get(&int(3), 0), CoeffPoly::monomial(int(-8), 1));
        let t = template_for(&map("power-sum(q=2)")).unwrap();
        assert_eq!(
            t.series.get(&ratio(3, 2), 2),
            CoeffPoly::constant(ratio(-1, 64))
        );
        assert!(matches!(
            template_for(&map("cos-map(x0=1/2)")),
            Err(TemplateError::NoTemplate(_))
        ));
    }

    #[test]
    fn reciprocal_limit_series() {
        let lims = FixtureSet::builtin().reciprocal_limits().unwrap();
        let xi = &lims[0];
        assert_eq!(xi.s, ratio(3, 2));
        let s = xi.as_series();
        assert_eq!(s.get(&ratio(5, 3), 1), CoeffPoly::constant(ratio(-1, 9)));
        assert!(!s.get(&ratio(5, 3), 0).is_zero());
        assert!(s.get(&ratio(5, 3), 0).coeff(1).is_negative());
    }
}
