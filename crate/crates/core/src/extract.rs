//! Numerical extraction of the constants, each with a certified or a
//! heuristic digit count.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rational, int, ratio, ExactReal, Rational};
use crate::maps::{make_map, Family, MapError, MapKind, MapSpec, RecurrenceMap};
use crate::orbit::{
    checkpoints, default_product_depth, doubling_log_orbit, iterate, tail_bound_from, DoublingForm,
    OrbitError, PrecisionPolicy,
};
use crate::precision::{agreement_digits, bits_for_digits, Hp};
use crate::series::{match_coefficients, AsymptoticSeries};
use crate::templates::{equation_for, Equation, FixtureSet, Normalization, TemplateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Rigorous,
    TwoDepthHeuristic,
}

impl std::fmt::Display for Certification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Certification::Rigorous => "rigorous",
            Certification::TwoDepthHeuristic => "two-depth-heuristic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Product,
    DoublingLog,
    ExpansionFit,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Product => "product",
            Method::DoublingLog => "doubling-log",
            Method::ExpansionFit => "expansion-fit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub map: String,
    pub name: String,
    pub value: String,
    pub certified_digits: u32,
    pub certification: Certification,
    pub method: Method,
    pub k_used: u64,
    pub precision_used: u32,
    pub elapsed_ms: f64,
    /// Other constants produced by the same run, e.g. `C` next to `c(q) = C/q`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub related: Vec<NamedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConstantEstimate {
    pub fn value_hp(&self, digits: u32) -> Hp {
        Hp::from_decimal_str(&self.value, digits).expect("values are decimal")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtractError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("newton solve for the constant did not converge at k={k} after {iterations} steps")]
    NewtonFailed { k: u64, iterations: u32 },
    #[error("order {order} expansion would need k={needed} (cap {cap}); the expansion order is the bottleneck")]
    InsufficientOrder {
        order: String,
        needed: u64,
        cap: u64,
    },
    #[error("precision exhausted: cancellation costs {loss} digits, guard is {guard}")]
    PrecisionExhausted { loss: u32, guard: u32 },
    #[error("{0}")]
    Unsupported(String),
}

impl From<MapError> for ExtractError {
    fn from(e: MapError) -> Self {
        ExtractError::Orbit(OrbitError::Map(e))
    }
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64() * 1e3
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

/// Digits guaranteed by a relative error bound `err`, capped at `target`.
fn digits_from_error(log10_err: f64, target: u32) -> u32 {
    if log10_err == f64::NEG_INFINITY {
        return target;
    }
    let d = (-log10_err).floor() - 1.0;
    if d <= 0.0 {
        0
    } else {
        (d as u32).min(target)
    }
}

fn log10_sum(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + (10f64.powf(a - m) + 10f64.powf(b - m)).log10()
}

fn printed(v: &Hp, policy: &PrecisionPolicy) -> String {
    v.to_decimal_string(policy.target_digits + 2)
}

/// `C = x0 prod (1 -/+ x_j)` with a rigorous truncation and rounding bound.
pub fn geometric_constant(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
) -> Result<ConstantEstimate, ExtractError> {
    geometric_constant_at(map, policy, default_product_depth(map, policy))
}

pub fn geometric_constant_at(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    n: u64,
) -> Result<ConstantEstimate, ExtractError> {
    if map.kind() != MapKind::GeometricDecay {
        return Err(OrbitError::WrongClassification {
            op: "geometric_constant",
            family: map.family(),
            expected: MapKind::GeometricDecay,
            found: map.kind(),
        }
        .into());
    }
    let sw = Stopwatch::start();
    let policy = policy.covering(n);
    let digits = policy.working_digits();
    let rec = iterate(map, &policy, n)?;
    let x_n = rec.x.expect("plain orbit");
    let product = rec.running_product.ok_or(OrbitError::WrongClassification {
        op: "geometric_constant",
        family: map.family(),
        expected: MapKind::GeometricDecay,
        found: map.kind(),
    })?;
    let bound = tail_bound_from(map, digits, n, &x_n)?;
    // |C/P_n - 1| <= e^B - 1 <= B (1 + B) for B < 1, plus accumulated rounding
    let b = bound.log10_abs();
    let trunc = b + (1.0 + 10f64.powf(b)).log10();
    let rounding = (16.0 * (n as f64 + 1.0)).log10()
        - bits_for_digits(digits) as f64 * std::f64::consts::LOG10_2;
    let certified = digits_from_error(log10_sum(trunc, rounding), policy.target_digits);
    Ok(ConstantEstimate {
        map: map.spec().to_string(),
        name: "C".into(),
        value: printed(&product, &policy),
        certified_digits: certified,
        certification: Certification::Rigorous,
        method: Method::Product,
        k_used: n,
        precision_used: digits,
        elapsed_ms: sw.ms(),
        related: Vec::new(),
        note: None,
    })
}

pub const DEFAULT_DOUBLING_DEPTH: u64 = 64;

/// `lim x_k^(2^-k)` (Sylvester: `2^(-k-1)`) from the log-domain orbit with its summed tail.
pub fn doubling_constant(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
) -> Result<ConstantEstimate, ExtractError> {
    doubling_constant_at(map, policy, DEFAULT_DOUBLING_DEPTH)
}

pub fn doubling_constant_at(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    k: u64,
) -> Result<ConstantEstimate, ExtractError> {
    let Some(form) = DoublingForm::of(map) else {
        return Err(OrbitError::WrongClassification {
            op: "doubling_constant",
            family: map.family(),
            expected: MapKind::DoublingGrowth,
            found: map.kind(),
        }
        .into());
    };
    let sw = Stopwatch::start();
    let policy = policy.covering(k);
    let digits = policy.working_digits();
    let logs = doubling_log_orbit(map, &policy, k + 1)?;
    let l_k = &logs[k as usize];
    // Lambda = 2^-K (L_K + shift) + 2^-(K+1) c_K + R,   |R| <= 2^-(K+1) bound(c(L_{K+1}))
    let two_k = Hp::from_i64(2, digits).powi(-(k as i64));
    let half = Hp::from_rational(&ratio(1, 2), digits);
    let lambda =
        &(&two_k * &(l_k + &form.shift(digits))) + &(&(&two_k * &half) * &form.correction(l_k));
    let (exponent, name) = match map.family() {
        Family::Sylvester => (ratio(1, 2), "sqrtC"),
        _ => (int(1), "C"),
    };
    let value = (&lambda * &Hp::from_rational(&exponent, digits)).exp();
    let l_next = logs[k as usize + 1].to_f64();
    let tail = form.correction_bound_log10(l_next) - (k as f64 + 1.0) * std::f64::consts::LOG10_2;
    let rounding = ((k as f64 + 2.0) * 4.0 * lambda.to_f64().abs().max(1.0)).log10()
        - bits_for_digits(digits) as f64 * std::f64::consts::LOG10_2;
    let err = log10_sum(tail, rounding) + exponent.to_f64().unwrap_or(1.0).log10() + 0.01;
    Ok(ConstantEstimate {
        map: map.spec().to_string(),
        name: name.into(),
        value: printed(&value, &policy),
        certified_digits: digits_from_error(err, policy.target_digits),
        certification: Certification::Rigorous,
        method: Method::DoublingLog,
        k_used: k,
        precision_used: digits,
        elapsed_ms: sw.ms(),
        related: Vec::new(),
        note: None,
    })
}

/// Expansion order and depth for an expansion fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitPlan {
    pub levels: u32,
    pub order: Rational,
    pub k: u64,
}

pub const FIT_K_SOFT_CAP: u64 = 50_000;
pub const FIT_K_HARD_CAP: u64 = 2_000_000;
const FIT_LEVELS: [u32; 6] = [6, 8, 10, 12, 14, 16];

fn rational_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest `K` with `(ln K)^M / K^(N + 1 - alpha*) < 10^-(target + 3)`, `M = levels + 1`.
fn depth_for(levels: u32, alpha0: f64, alpha_star: f64, target: u32) -> u64 {
    let n = alpha0 + levels as f64;
    let m = levels as f64 + 1.0;
    let gap = n + 1.0 - alpha_star;
    let goal = -(target as f64 + 3.0);
    let mut k = 64f64;
    while k < 1e12 {
        if m * k.ln().log10() - gap * k.log10() < goal {
            return k.ceil() as u64;
        }
        k *= 1.1;
    }
    u64::MAX
}

pub fn plan_fit(
    alpha0: &Rational,
    alpha_star: &Rational,
    target: u32,
) -> Result<FitPlan, ExtractError> {
    let (a0, a_s) = (rational_f64(alpha0), rational_f64(alpha_star));
    let mut best = None;
    for levels in FIT_LEVELS {
        let k = depth_for(levels, a0, a_s, target);
        best = Some((levels, k));
        if k <= FIT_K_SOFT_CAP {
            break;
        }
    }
    let (levels, k) = best.expect("nonempty level list");
    let order = alpha0 + Rational::from_integer(BigInt::from(levels));
    if k > FIT_K_HARD_CAP {
        return Err(ExtractError::InsufficientOrder {
            order: fmt_rational(&order),
            needed: k,
            cap: FIT_K_HARD_CAP,
        });
    }
    Ok(FitPlan { levels, order, k })
}

fn expansion_cache() -> &'static Mutex<HashMap<(String, String), AsymptoticSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, String), AsymptoticSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Matched expansion of `eq` through `order`, memoized per process.
pub fn derived_series(eq: &Equation, order: &Rational) -> Result<AsymptoticSeries, ExtractError> {
    let key = (eq.formula(), fmt_rational(order));
    if let Some(s) = expansion_cache().lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let s = match_coefficients(eq, &eq.ansatz(), order).map_err(TemplateError::from)?;
    expansion_cache().lock().unwrap().insert(key, s.clone());
    Ok(s)
}

/// Lowest exponent whose coefficient involves `C`.
pub fn resonant_alpha(series: &AsymptoticSeries) -> Option<Rational> {
    series
        .terms()
        .find(|(_, c)| c.degree().unwrap_or(0) >= 1)
        .map(|(k, _)| k.alpha.clone())
}

fn newton(poly: &[Hp], target: &Hp, tol_digits: u32, k: u64) -> Result<Hp, ExtractError> {
    let digits = target.digits();
    let eval = |c: &Hp| -> (Hp, Hp) {
        let mut f = Hp::zero(digits);
        let mut d = Hp::zero(digits);
        for a in poly.iter().rev() {
            d = &(&d * c) + &f;
            f = &(&f * c) + a;
        }
        (&f - target, d)
    };
    let tol = Hp::from_i64(10, digits).powi(-(tol_digits as i64));
    let mut c = Hp::zero(digits);
    let (mut f, _) = eval(&c);
    for it in 0..60u32 {
        let (_, d) = eval(&c);
        if d.is_zero() {
            return Err(ExtractError::NewtonFailed { k, iterations: it });
        }
        let mut step = &f / &d;
        let mut next = &c - &step;
        let (mut fn_, _) = eval(&next);
        let mut damp = 0;
        while fn_.abs() > f.abs() && damp < 30 && it > 0 {
            step = &step * &Hp::from_rational(&ratio(1, 2), digits);
            next = &c - &step;
            fn_ = eval(&next).0;
            damp += 1;
        }
        c = next;
        f = fn_;
        let scale = &Hp::from_i64(1, digits) + &c.abs();
        if step.abs() <= &tol * &scale {
            return Ok(c);
        }
    }
    Err(ExtractError::NewtonFailed { k, iterations: 60 })
}

/// Solves `expansion(K, C) = normalized x_K` at `K` and `2K`; certified digits are the
/// agreement of the two solves minus 2, labelled as a heuristic.
pub fn expansion_constant(
    map: &RecurrenceMap,
    series: &AsymptoticSeries,
    normalization: &Normalization,
    policy: &PrecisionPolicy,
    k: u64,
) -> Result<(Hp, ConstantEstimate), ExtractError> {
    let sw = Stopwatch::start();
    let alpha0 = series
        .first_key()
        .map(|k| k.alpha.clone())
        .ok_or_else(|| ExtractError::Unsupported("empty expansion".into()))?;
    let alpha_star = resonant_alpha(series)
        .ok_or_else(|| ExtractError::Unsupported("expansion has no free constant".into()))?;
    let policy = policy.covering(2 * k);
    let digits = policy.working_digits();
    let loss_cancel = (rational_f64(&(&alpha_star - &alpha0)) * (2.0 * k as f64).log10()).ceil();
    let loss_orbit = (2.0 * k as f64).log10().ceil();
    let loss = (loss_cancel + loss_orbit) as u32;
    if loss + 2 > policy.guard_digits {
        return Err(ExtractError::PrecisionExhausted {
            loss,
            guard: policy.guard_digits,
        });
    }
    let xs = checkpoints(map, &policy, &[k, 2 * k])?;
    let factor = normalization.factor(digits);
    let mut solves = Vec::new();
    for (kk, x) in [k, 2 * k].into_iter().zip(xs) {
        let s = &factor * &x;
        let poly = series.collapse(&Hp::from_i64(kk as i64, digits));
        solves.push(newton(&poly, &s, digits - 5, kk)?);
    }
    let agree = agreement_digits(&solves[0], &solves[1]);
    let certified = (agree - 2).clamp(0, policy.target_digits as i64) as u32;
    let value = solves[1].clone();
    let est = ConstantEstimate {
        map: map.spec().to_string(),
        name: "C".into(),
        value: printed(&value, &policy),
        certified_digits: certified,
        certification: Certification::TwoDepthHeuristic,
        method: Method::ExpansionFit,
        k_used: 2 * k,
        precision_used: digits,
        elapsed_ms: sw.ms(),
        related: Vec::new(),
        note: Some(format!(
            "expansion through k^-{}, solves at k={} and k={}",
            fmt_rational(series.truncation()),
            k,
            2 * k
        )),
    };
    Ok((value, est))
}

/// Options for the expansion-fit extractors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitOptions {
    /// First depth `K` (the second solve uses `2K`).
    pub k: Option<u64>,
    pub levels: Option<u32>,
}

fn fit_setup(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    opts: &FitOptions,
) -> Result<(Equation, Normalization, AsymptoticSeries, u64), ExtractError> {
    let (eq, norm) = equation_for(map)
        .ok_or_else(|| ExtractError::Unsupported(format!("no expansion for {}", map.spec())))?;
    let ans = eq.ansatz();
    let alpha0 = ans.lead.1.clone();
    let alpha_star = &alpha0 + int(1);
    let plan = plan_fit(&alpha0, &alpha_star, policy.target_digits)?;
    let levels = opts.levels.unwrap_or(plan.levels);
    let order = &alpha0 + Rational::from_integer(BigInt::from(levels));
    let k = match (opts.k, opts.levels) {
        (Some(k), _) => k,
        (None, Some(l)) => depth_for(
            l,
            rational_f64(&alpha0),
            rational_f64(&alpha_star),
            policy.target_digits,
        ),
        (None, None) => plan.k,
    };
    if k > FIT_K_HARD_CAP {
        return Err(ExtractError::InsufficientOrder {
            order: fmt_rational(&order),
            needed: k,
            cap: FIT_K_HARD_CAP,
        });
    }
    let series = derived_series(&eq, &order)?;
    Ok((eq, norm, series, k))
}

/// Constant `C` of an algebraically decaying map from a matched expansion.
pub fn algebraic_constant(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    opts: &FitOptions,
) -> Result<ConstantEstimate, ExtractError> {
    if map.family() == Family::Reciprocal {
        return reciprocal_constant_with(map.s().expect("validated"), policy, opts);
    }
    if map.kind() != MapKind::AlgebraicDecay {
        return Err(ExtractError::Unsupported(format!(
            "{} is not algebraically decaying",
            map.spec()
        )));
    }
    let (_, norm, series, k) = fit_setup(map, policy, opts)?;
    Ok(expansion_constant(map, &series, &norm, policy, k)?.1)
}

/// `c(q)` through the reciprocal map `w -> w/(1 + w^s)`, `s = q`, whose matched expansion
/// carries `c` itself as its free constant.
pub fn reciprocal_constant(
    s: &Rational,
    policy: &PrecisionPolicy,
) -> Result<ConstantEstimate, ExtractError> {
    reciprocal_constant_with(s, policy, &FitOptions::default())
}

pub fn reciprocal_constant_with(
    s: &Rational,
    policy: &PrecisionPolicy,
    opts: &FitOptions,
) -> Result<ConstantEstimate, ExtractError> {
    let map = make_map(MapSpec::reciprocal(s.clone()))?;
    let (_, norm, series, k) = fit_setup(&map, policy, opts)?;
    let limits = FixtureSet::builtin().reciprocal_limits()?;
    let fixture = limits.iter().find(|l| &l.s == s);
    if let Some(l) = fixture {
        let prefix = series.truncate(&l.limit_alpha);
        if prefix != l.as_series() {
            return Err(ExtractError::Template(TemplateError::Fixture {
                file: "reciprocal-limits.json".into(),
                msg: format!(
                    "derived prefix disagrees with the stored limit for s={}",
                    fmt_rational(s)
                ),
            }));
        }
    }
    let (_, mut est) = expansion_constant(&map, &series, &norm, policy, k)?;
    est.name = fixture
        .map(|l| l.name.clone())
        .unwrap_or_else(|| "c(q)".into());
    est.note = Some(format!(
        "c({}) via reciprocal(s={}); {}",
        fmt_rational(s),
        fmt_rational(s),
        est.note.unwrap_or_default()
    ));
    Ok(est)
}

/// `c(q) = C(q)/q` for `x -> x + x^(1-q)`; `C` is reported in `related`.
///
/// `q = 2, 3` fit the direct expansion; other `q` go through the reciprocal map.
pub fn power_sum_constant(
    q: &Rational,
    policy: &PrecisionPolicy,
    opts: &FitOptions,
) -> Result<ConstantEstimate, ExtractError> {
    let map = make_map(MapSpec::power_sum(q.clone()))?;
    let digits = policy.working_digits() + 10;
    let direct = *q == int(2) || *q == int(3);
    let mut est = if direct {
        let (_, norm, series, k) = fit_setup(&map, policy, opts)?;
        let (big_c, mut est) = expansion_constant(&map, &series, &norm, policy, k)?;
        let c = &big_c / &Hp::from_rational(q, big_c.digits());
        est.related = vec![NamedValue {
            name: "C".into(),
            value: printed(&big_c, policy),
        }];
        est.value = printed(&c, policy);
        est
    } else {
        let mut est = reciprocal_constant_with(q, policy, opts)?;
        let c = est.value_hp(digits);
        est.related = vec![NamedValue {
            name: "C".into(),
            value: printed(&(&c * &Hp::from_rational(q, digits)), policy),
        }];
        est
    };
    est.map = map.spec().to_string();
    est.name = "c(q)".into();
    Ok(est)
}

/// Classification-appropriate extractor.
pub fn estimate(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    opts: &FitOptions,
) -> Result<ConstantEstimate, ExtractError> {
    match map.kind() {
        MapKind::GeometricDecay => match opts.k {
            Some(n) => geometric_constant_at(map, policy, n),
            None => geometric_constant(map, policy),
        },
        MapKind::DoublingGrowth => {
            doubling_constant_at(map, policy, opts.k.unwrap_or(DEFAULT_DOUBLING_DEPTH))
        }
        MapKind::AlgebraicDecay => algebraic_constant(map, policy, opts),
        MapKind::AlgebraicGrowth => power_sum_constant(map.q().expect("validated"), policy, opts),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x0: ExactReal,
    pub estimate: ConstantEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub argmin: usize,
}

/// `C(x0)` over a grid of starting values; the default precision is 12 digits.
pub fn minimality_scan(
    base: &MapSpec,
    grid: &[ExactReal],
    policy: &PrecisionPolicy,
) -> Result<ScanResult, ExtractError> {
    let mut rows = Vec::with_capacity(grid.len());
    for x0 in grid {
        let map = make_map(base.with_x0(x0.clone()))?;
        let est = algebraic_constant(&map, policy, &FitOptions::default())?;
        rows.push(ScanRow {
            x0: x0.clone(),
            estimate: est,
        });
    }
    let digits = policy.working_digits();
    let argmin = rows
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.estimate
                .value_hp(digits)
                .partial_cmp(&b.1.estimate.value_hp(digits))
                .expect("finite")
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(ScanResult { rows, argmin })
}

/// Digits on which an estimate agrees with a decimal reference string.
pub fn matching_digits(est: &ConstantEstimate, reference: &str) -> i64 {
    let d = est.precision_used.max(60);
    let r = Hp::from_decimal_str(reference, d).expect("decimal reference");
    agreement_digits(&est.value_hp(d), &r)
}

/// `true` if `value` lies within one unit of the last printed digit of the
/// truncated `reference`, i.e. in `[r - ulp/2, r + 3ulp/2]`.
pub fn matches_reference(value: &str, reference: &str) -> bool {
    let printed = crate::reference::printed_digits(reference);
    let d = printed + 20;
    let v = Hp::from_decimal_str(value, d).expect("decimal");
    let r = Hp::from_decimal_str(reference, d).expect("decimal");
    let ulp_exp = r.log10_abs().floor() as i64 - printed as i64 + 1;
    let half_ulp = &Hp::from_i64(10, d).powi(ulp_exp) * &Hp::from_rational(&ratio(1, 2), d);
    let mid = &r + &half_ulp;
    (&v - &mid).abs() <= &half_ulp + &half_ulp
}
