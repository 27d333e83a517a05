//! Catalog of the recurrences, with parameter validation and the canonical text form.
//!
//! A spec such as `logistic(p=1/2, x0=1/2)` parses into a [`MapSpec`];
//! [`RecurrenceMap::new`] validates it and attaches the asymptotic
//! classification that routes it to an extractor.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{fmt_rational, int, parse_rational, ratio, ExactReal, Rational};
use crate::precision::Hp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("unknown map family {0:?}")]
    UnknownFamily(String),
    #[error("malformed map spec {spec:?}: {reason}")]
    Syntax { spec: String, reason: String },
    #[error("{0}")]
    Domain(String),
    #[error("{family} step left its domain at x = {x}")]
    OutsideDomain { family: Family, x: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Logistic,
    LogisticPlus,
    Sylvester,
    Pythagorean,
    SqrtMap,
    CubicMap,
    HalfCubic,
    CosMap,
    GaussExp,
    PowerSum,
    Reciprocal,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Logistic,
        Family::LogisticPlus,
        Family::Sylvester,
        Family::Pythagorean,
        Family::SqrtMap,
        Family::CubicMap,
        Family::HalfCubic,
        Family::CosMap,
        Family::GaussExp,
        Family::PowerSum,
        Family::Reciprocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Logistic => "logistic",
            Family::LogisticPlus => "logistic-plus",
            Family::Sylvester => "sylvester",
            Family::Pythagorean => "pythagorean",
            Family::SqrtMap => "sqrt-map",
            Family::CubicMap => "cubic-map",
            Family::HalfCubic => "half-cubic",
            Family::CosMap => "cos-map",
            Family::GaussExp => "gauss-exp",
            Family::PowerSum => "power-sum",
            Family::Reciprocal => "reciprocal",
        }
    }

    /// The recurrence in words, for help text and the demo page.
    pub fn formula(self) -> &'static str {
        match self {
            Family::Logistic => "x -> p x (1 - x)",
            Family::LogisticPlus => "x -> p x (1 + x)",
            Family::Sylvester => "y -> y^2 - y + 1",
            Family::Pythagorean => "z -> (z^2 + 1) / 2",
            Family::SqrtMap => "x -> x (1 - sqrt(x))",
            Family::CubicMap => "x -> x (1 - x^2)",
            Family::HalfCubic => "u -> u (1 - u^2 / 2)",
            Family::CosMap => "v -> v cos(v)",
            Family::GaussExp => "w -> w exp(-w^2 / 2)",
            Family::PowerSum => "x -> x + x^(1 - q)",
            Family::Reciprocal => "x -> x / (1 + x^s)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = MapError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| MapError::UnknownFamily(s.trim().to_string()))
    }
}

/// A family plus its parameters. Parameters are exact; `x0` may be a surd such as `1/sqrt(3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapSpec {
    pub family: Family,
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub s: Option<Rational>,
    pub x0: ExactReal,
}

impl MapSpec {
    pub fn logistic(p: Rational, x0: Rational) -> Self {
        Self::with(Family::Logistic, Some(p), None, None, x0)
    }

    /// `x0 = (1-p)/(2p)` for `p < 1`, the midpoint convention; `x0 = 1` for `p = 1`.
    pub fn logistic_plus_mid(p: Rational) -> Self {
        let x0 = auto_mid(&p);
        Self::with(Family::LogisticPlus, Some(p), None, None, x0)
    }

    pub fn logistic_plus(p: Rational, x0: Rational) -> Self {
        Self::with(Family::LogisticPlus, Some(p), None, None, x0)
    }

    pub fn decay(family: Family, x0: ExactReal) -> Self {
        Self {
            family,
            p: None,
            q: None,
            s: None,
            x0,
        }
    }

    pub fn power_sum(q: Rational) -> Self {
        Self::with(Family::PowerSum, None, Some(q), None, int(1))
    }

    pub fn reciprocal(s: Rational) -> Self {
        Self::with(Family::Reciprocal, None, None, Some(s), int(1))
    }

    pub fn sylvester() -> Self {
        Self::with(Family::Sylvester, None, None, None, int(2))
    }

    pub fn pythagorean() -> Self {
        Self::with(Family::Pythagorean, None, None, None, int(3))
    }

    fn with(
        family: Family,
        p: Option<Rational>,
        q: Option<Rational>,
        s: Option<Rational>,
        x0: Rational,
    ) -> Self {
        Self {
            family,
            p,
            q,
            s,
            x0: ExactReal::rational(x0),
        }
    }

    /// Same map, different starting value.
    pub fn with_x0(&self, x0: ExactReal) -> Self {
        Self { x0, ..self.clone() }
    }

    /// Parameters as `name=value` pairs, in canonical order (x0 excluded).
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(p) = &self.p {
            out.push(("p", fmt_rational(p)));
        }
        if let Some(q) = &self.q {
            out.push(("q", fmt_rational(q)));
        }
        if let Some(s) = &self.s {
            out.push(("s", fmt_rational(s)));
        }
        out
    }

    fn x0_is_printed(&self) -> bool {
        !matches!(
            self.family,
            Family::Sylvester | Family::Pythagorean | Family::PowerSum | Family::Reciprocal
        )
    }
}

fn auto_mid(p: &Rational) -> Rational {
    if p.is_one() {
        int(1)
    } else {
        (int(1) - p) / (int(2) * p)
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .params()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if self.x0_is_printed() {
            parts.push(format!("x0={}", self.x0));
        }
        if parts.is_empty() {
            f.write_str(self.family.name())
        } else {
            write!(f, "{}({})", self.family.name(), parts.join(", "))
        }
    }
}

impl FromStr for MapSpec {
    type Err = MapError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let syntax = |reason: &str| MapError::Syntax {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let (name, args) = match t.find('(') {
            Some(i) => {
                let inner = t[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| syntax("missing closing parenthesis"))?;
                (&t[..i], inner)
            }
            None => (t, ""),
        };
        let family: Family = name.parse()?;
        let mut p = None;
        let mut q = None;
        let mut s = None;
        let mut x0: Option<String> = None;
        for arg in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
            let (k, v) = arg
                .split_once('=')
                .ok_or_else(|| syntax("expected key=value"))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || parse_rational(v).map_err(|e| syntax(&e.to_string()));
            match k {
                "p" => p = Some(num()?),
                "q" => q = Some(num()?),
                "s" => s = Some(num()?),
                "x0" | "y0" | "z0" => x0 = Some(v.to_string()),
                _ => return Err(syntax(&format!("unknown parameter {k:?}"))),
            }
        }
        let allowed: &[&str] = match family {
            Family::Logistic | Family::LogisticPlus => &["p", "x0"],
            Family::PowerSum => &["q", "x0"],
            Family::Reciprocal => &["s", "x0"],
            Family::Sylvester | Family::Pythagorean => &["x0"],
            _ => &["x0"],
        };
        for (key, present) in [("p", p.is_some()), ("q", q.is_some()), ("s", s.is_some())] {
            if present && !allowed.contains(&key) {
                return Err(syntax(&format!("{family} takes no parameter {key}")));
            }
        }
        let default_x0 = |p: &Option<Rational>| -> Option<Rational> {
            match family {
                Family::Logistic => Some(ratio(1, 2)),
                Family::LogisticPlus => p.as_ref().map(auto_mid),
                Family::Sylvester => Some(int(2)),
                Family::Pythagorean => Some(int(3)),
                Family::PowerSum | Family::Reciprocal => Some(int(1)),
                _ => Some(ratio(1, 2)),
            }
        };
        let x0 = match x0.as_deref() {
            None | Some("auto-mid") => {
                if x0.is_some() && family != Family::LogisticPlus {
                    return Err(syntax("auto-mid applies only to logistic-plus"));
                }
                ExactReal::rational(
                    default_x0(&p).ok_or_else(|| MapError::Domain("missing parameter p".into()))?,
                )
            }
            Some(v) => v
                .parse()
                .map_err(|e: crate::exact::ParseExactError| syntax(&e.to_string()))?,
        };
        Ok(MapSpec {
            family,
            p,
            q,
            s,
            x0,
        })
    }
}

impl Serialize for MapSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MapSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    GeometricDecay,
    AlgebraicDecay,
    DoublingGrowth,
    AlgebraicGrowth,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::GeometricDecay => "geometric-decay",
            MapKind::AlgebraicDecay => "algebraic-decay",
            MapKind::DoublingGrowth => "doubling-growth",
            MapKind::AlgebraicGrowth => "algebraic-growth",
        })
    }
}

/// `rate` is `p` for geometric decay, the exponent `tau` in `x_k ~ (lambda/k)^(1/tau)` for
/// algebraic decay, 2 for doubling growth and `q` for algebraic growth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapClassification {
    pub kind: MapKind,
    pub rate: Rational,
}

/// A validated recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceMap {
    spec: MapSpec,
    class: MapClassification,
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), MapError> {
    if cond {
        Ok(())
    } else {
        Err(MapError::Domain(msg.into()))
    }
}

fn param(v: &Option<Rational>, name: &str, family: Family) -> Result<Rational, MapError> {
    v.clone()
        .ok_or_else(|| MapError::Domain(format!("{family} requires parameter {name}")))
}

/// Validates `spec` and attaches its classification.
pub fn make_map(spec: MapSpec) -> Result<RecurrenceMap, MapError> {
    RecurrenceMap::new(spec)
}

impl RecurrenceMap {
    pub fn new(spec: MapSpec) -> Result<Self, MapError> {
        let x0 = &spec.x0;
        let zero = Rational::zero();
        let one = int(1);
        let in_open = |lo: &Rational, hi: &Rational| {
            x0.cmp_rational(lo).is_gt() && x0.cmp_rational(hi).is_lt()
        };
        let class = match spec.family {
            Family::Logistic | Family::LogisticPlus => {
                let p = param(&spec.p, "p", spec.family)?;
                require(p.is_positive() && p <= one, "p must satisfy 0<p≤1")?;
                if spec.family == Family::Logistic {
                    require(in_open(&zero, &one), "x0 must satisfy 0<x0<1")?;
                    if p.is_one() {
                        MapClassification {
                            kind: MapKind::AlgebraicDecay,
                            rate: int(1),
                        }
                    } else {
                        MapClassification {
                            kind: MapKind::GeometricDecay,
                            rate: p,
                        }
                    }
                } else if p.is_one() {
                    require(
                        x0.as_rational() == Some(&one),
                        "logistic-plus with p=1 requires x0=1",
                    )?;
                    MapClassification {
                        kind: MapKind::DoublingGrowth,
                        rate: int(2),
                    }
                } else {
                    let fixed = (&one - &p) / &p;
                    require(
                        in_open(&zero, &fixed),
                        format!("x0 must satisfy 0<x0<(1−p)/p={}", fmt_rational(&fixed)),
                    )?;
                    MapClassification {
                        kind: MapKind::GeometricDecay,
                        rate: p,
                    }
                }
            }
            Family::Sylvester => {
                require(x0.as_rational() == Some(&int(2)), "sylvester requires y0=2")?;
                MapClassification {
                    kind: MapKind::DoublingGrowth,
                    rate: int(2),
                }
            }
            Family::Pythagorean => {
                require(
                    x0.as_rational() == Some(&int(3)),
                    "pythagorean requires z0=3",
                )?;
                MapClassification {
                    kind: MapKind::DoublingGrowth,
                    rate: int(2),
                }
            }
            Family::SqrtMap | Family::CubicMap | Family::CosMap | Family::GaussExp => {
                require(in_open(&zero, &one), "x0 must satisfy 0<x0<1")?;
                let rate = if spec.family == Family::SqrtMap {
                    ratio(1, 2)
                } else {
                    int(2)
                };
                MapClassification {
                    kind: MapKind::AlgebraicDecay,
                    rate,
                }
            }
            Family::HalfCubic => {
                require(
                    x0.is_positive() && x0.square() < int(2),
                    "x0 must satisfy 0<x0<sqrt(2)",
                )?;
                MapClassification {
                    kind: MapKind::AlgebraicDecay,
                    rate: int(2),
                }
            }
            Family::PowerSum => {
                let q = param(&spec.q, "q", spec.family)?;
                require(q > one, "q must satisfy q>1")?;
                require(x0.as_rational() == Some(&one), "power-sum requires x0=1")?;
                MapClassification {
                    kind: MapKind::AlgebraicGrowth,
                    rate: q,
                }
            }
            Family::Reciprocal => {
                let s = param(&spec.s, "s", spec.family)?;
                require(s.is_positive(), "s must satisfy s>0")?;
                require(x0.as_rational() == Some(&one), "reciprocal requires x0=1")?;
                MapClassification {
                    kind: MapKind::AlgebraicDecay,
                    rate: s,
                }
            }
        };
        Ok(Self { spec, class })
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn classification(&self) -> &MapClassification {
        &self.class
    }

    pub fn kind(&self) -> MapKind {
        self.class.kind
    }

    pub fn p(&self) -> Option<&Rational> {
        self.spec.p.as_ref()
    }

    pub fn q(&self) -> Option<&Rational> {
        self.spec.q.as_ref()
    }

    pub fn s(&self) -> Option<&Rational> {
        self.spec.s.as_ref()
    }

    pub fn x0(&self, digits: u32) -> Hp {
        Hp::from_exact(&self.spec.x0, digits)
    }

    /// `(1-p)/p` for logistic-plus with `p<1`, 0 for every decaying family, none for growth.
    pub fn fixed_point(&self) -> Option<Rational> {
        match self.class.kind {
            MapKind::GeometricDecay if self.family() == Family::LogisticPlus => {
                let p = self.spec.p.as_ref().expect("validated");
                Some((int(1) - p) / p)
            }
            MapKind::GeometricDecay | MapKind::AlgebraicDecay => Some(Rational::zero()),
            MapKind::DoublingGrowth | MapKind::AlgebraicGrowth => None,
        }
    }

    /// The margin `1 - p - p x0` of a logistic-plus start below the fixed point.
    pub fn margin(&self, digits: u32) -> Option<Hp> {
        if self.family() != Family::LogisticPlus || self.class.kind != MapKind::GeometricDecay {
            return None;
        }
        let p = Hp::from_rational(self.spec.p.as_ref().unwrap(), digits);
        let one = Hp::from_i64(1, digits);
        Some(&(&one - &p) - &(&p * &self.x0(digits)))
    }

    /// Ratio of the geometric envelope `x_j <= x_n rho^(j-n)`: `p` for logistic, `1 - eps` for logistic-plus.
    pub fn envelope_ratio(&self, digits: u32) -> Option<Hp> {
        if self.class.kind != MapKind::GeometricDecay {
            return None;
        }
        match self.margin(digits) {
            Some(eps) => Some(&Hp::from_i64(1, digits) - &eps),
            None => Some(Hp::from_rational(self.spec.p.as_ref().unwrap(), digits)),
        }
    }

    /// Step function with its constants rounded once to `digits`.
    pub fn stepper(&self, digits: u32) -> Stepper<'_> {
        let constant = match self.family() {
            Family::Logistic | Family::LogisticPlus => {
                Some(Hp::from_rational(self.spec.p.as_ref().unwrap(), digits))
            }
            _ => None,
        };
        let upper = match self.family() {
            Family::LogisticPlus if self.class.kind == MapKind::GeometricDecay => {
                self.fixed_point()
            }
            Family::Logistic
            | Family::SqrtMap
            | Family::CubicMap
            | Family::CosMap
            | Family::GaussExp => Some(int(1)),
            Family::Reciprocal => Some(int(1)),
            _ => None,
        };
        Stepper {
            map: self,
            digits,
            one: Hp::from_i64(1, digits),
            half: Hp::from_rational(&ratio(1, 2), digits),
            constant,
            upper: upper.map(|u| (Hp::from_rational(&u, digits), u)),
        }
    }

    /// One application of the recurrence at the precision of `x`.
    pub fn step(&self, x: &Hp) -> Result<Hp, MapError> {
        self.stepper(x.digits()).step(x)
    }

    /// Exact rational step for the rational families (`None` when the step is irrational).
    pub fn step_exact(&self, x: &Rational) -> Option<Rational> {
        let one = int(1);
        Some(match self.family() {
            Family::Logistic => self.spec.p.as_ref()? * x * (&one - x),
            Family::LogisticPlus => self.spec.p.as_ref()? * x * (&one + x),
            Family::Sylvester => x * x - x + &one,
            Family::Pythagorean => (x * x + &one) / int(2),
            Family::CubicMap => x * (&one - x * x),
            Family::HalfCubic => x * (&one - x * x / int(2)),
            Family::PowerSum => {
                let q = self.spec.q.as_ref()?;
                if !q.is_integer() {
                    return None;
                }
                let e: i32 = q.to_integer().try_into().ok()?;
                x + x.pow(1 - e)
            }
            Family::Reciprocal => {
                let s = self.spec.s.as_ref()?;
                if !s.is_integer() {
                    return None;
                }
                let e: i32 = s.to_integer().try_into().ok()?;
                x / (&one + x.pow(e))
            }
            Family::SqrtMap | Family::CosMap | Family::GaussExp => return None,
        })
    }
}

/// A map bound to one working precision; constants are rounded once, not per step.
pub struct Stepper<'a> {
    map: &'a RecurrenceMap,
    digits: u32,
    one: Hp,
    half: Hp,
    constant: Option<Hp>,
    upper: Option<(Hp, Rational)>,
}

impl Stepper<'_> {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn step(&self, x: &Hp) -> Result<Hp, MapError> {
        self.check(x)?;
        let one = &self.one;
        let y = match self.map.family() {
            Family::Logistic => self.constant.as_ref().unwrap() * x * (one - x),
            Family::LogisticPlus => self.constant.as_ref().unwrap() * x * (one + x),
            Family::Sylvester => x * x - x + one,
            Family::Pythagorean => (x * x + one) * &self.half,
            Family::SqrtMap => x * (one - &x.sqrt()),
            Family::CubicMap => x * (one - &(x * x)),
            Family::HalfCubic => x * (one - &(x * x * &self.half)),
            Family::CosMap => x * &x.cos(),
            Family::GaussExp => x * &(-(x * x * &self.half)).exp(),
            Family::PowerSum => {
                let q = self.map.spec.q.as_ref().unwrap();
                x + &x.pow_rational(&(int(1) - q))
            }
            Family::Reciprocal => {
                let s = self.map.spec.s.as_ref().unwrap();
                x / &(one + &x.pow_rational(s))
            }
        };
        Ok(y)
    }

    fn check(&self, x: &Hp) -> Result<(), MapError> {
        let lower_ok = match self.map.family() {
            Family::Sylvester | Family::Pythagorean | Family::PowerSum => x >= &self.one,
            _ => x.is_positive(),
        };
        let upper_ok = match &self.upper {
            None => true,
            Some((hp, exact)) => {
                if self.map.family() == Family::Reciprocal {
                    x <= hp
                } else {
                    let f = x.to_f64();
                    let u = hp.to_f64();
                    if (f - u).abs() > 1e-9 * u.abs() {
                        f < u
                    } else {
                        &x.to_rational() < exact
                    }
                }
            }
        };
        if lower_ok && upper_ok {
            Ok(())
        } else {
            Err(MapError::OutsideDomain {
                family: self.map.family(),
                x: x.to_decimal_string(20),
            })
        }
    }
}

/// Free-function form of [`RecurrenceMap::step`].
pub fn step(map: &RecurrenceMap, x: &Hp) -> Result<Hp, MapError> {
    map.step(x)
}

/// Free-function form of [`RecurrenceMap::fixed_point`].
pub fn fixed_point(map: &RecurrenceMap) -> Option<Rational> {
    map.fixed_point()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(s: &str) -> RecurrenceMap {
        make_map(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let m = map("logistic(p=1/2, x0=1/2)");
        assert_eq!(m.kind(), MapKind::GeometricDecay);
        assert_eq!(m.classification().rate, ratio(1, 2));
        let m = map("power-sum(q=3/2)");
        assert_eq!(m.kind(), MapKind::AlgebraicGrowth);
        assert_eq!(m.classification().rate, ratio(3, 2));
        assert_eq!(map("logistic(p=1, x0=1/2)").kind(), MapKind::AlgebraicDecay);
        assert_eq!(map("logistic-plus(p=1)").kind(), MapKind::DoublingGrowth);
        assert_eq!(map("sylvester").kind(), MapKind::DoublingGrowth);
        assert_eq!(map("pythagorean").kind(), MapKind::DoublingGrowth);
        assert_eq!(map("reciprocal(s=3/2)").kind(), MapKind::AlgebraicDecay);
        for f in [
            "sqrt-map",
            "cubic-map",
            "half-cubic",
            "cos-map",
            "gauss-exp",
        ] {
            assert_eq!(map(f).kind(), MapKind::AlgebraicDecay, "{f}");
        }
    }

    #[test]
    fn domain_errors_name_the_inequality() {
        let err = make_map("logistic-plus(p=1/2, x0=3/2)".parse().unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "x0 must satisfy 0<x0<(1−p)/p=1");
        let err = make_map("logistic(p=2, x0=1/2)".parse().unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "p must satisfy 0<p≤1");
        assert!(make_map("power-sum(q=1)".parse().unwrap()).is_err());
        assert!(make_map("reciprocal(s=0)".parse().unwrap()).is_err());
        assert!(make_map("logistic-plus(p=1, x0=1/2)".parse().unwrap()).is_err());
        assert!(make_map("sqrt-map(x0=1)".parse().unwrap()).is_err());
        assert!(matches!(
            "tent(x0=1/2)".parse::<MapSpec>(),
            Err(MapError::UnknownFamily(_))
        ));
        assert!("logistic(q=2)".parse::<MapSpec>().is_err());
    }

    #[test]
    fn steps() {
        let m = map("logistic(p=1/2, x0=1/2)");
        let x = m.step(&Hp::from_rational(&ratio(1, 2), 30)).unwrap();
        assert_eq!(x.to_rational(), ratio(1, 8));
        let syl = map("sylvester");
        let y = syl.step(&Hp::from_i64(2, 30)).unwrap();
        assert_eq!(y.to_rational(), int(3));
        assert_eq!(syl.step(&y).unwrap().to_rational(), int(7));
        let ps = map("power-sum(q=2)");
        assert_eq!(ps.step(&Hp::from_i64(1, 30)).unwrap().to_rational(), int(2));
        assert!(m.step(&Hp::from_i64(2, 30)).is_err());
    }

    #[test]
    fn fixed_points() {
        assert_eq!(
            map("logistic-plus(p=1/2, x0=1/2)").fixed_point(),
            Some(int(1))
        );
        assert_eq!(
            map("logistic-plus(p=1/5, x0=2)").fixed_point(),
            Some(int(4))
        );
        assert_eq!(map("power-sum(q=2)").fixed_point(), None);
        assert_eq!(map("sqrt-map").fixed_point(), Some(int(0)));
    }

    #[test]
    fn envelope_of_logistic_plus() {
        let m = map("logistic-plus(p=4/5, x0=1/8)");
        let eps = m.margin(30).unwrap();
        assert_eq!(eps.to_decimal_string(10), "0.1000000000");
        assert_eq!(
            m.envelope_ratio(30).unwrap().to_decimal_string(10),
            "0.9000000000"
        );
    }

    #[test]
    fn canonical_text_form() {
        let s: MapSpec = "logistic-plus(p=1/2, x0=auto-mid)".parse().unwrap();
        assert_eq!(s.x0.as_rational(), Some(&ratio(1, 2)));
        assert_eq!(s.to_string(), "logistic-plus(p=1/2, x0=1/2)");
        let c: MapSpec = "cubic-map(x0=1/sqrt(3))".parse().unwrap();
        assert_eq!(c.to_string(), "cubic-map(x0=1/3*sqrt(3))");
        assert_eq!(c.to_string().parse::<MapSpec>().unwrap(), c);
        assert_eq!(
            "sylvester".parse::<MapSpec>().unwrap().to_string(),
            "sylvester"
        );
        assert_eq!(
            "power-sum( q = 2 )".parse::<MapSpec>().unwrap().to_string(),
            "power-sum(q=2)"
        );
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<MapSpec>(&json).unwrap(), c);
    }
}
