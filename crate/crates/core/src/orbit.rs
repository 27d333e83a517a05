//! Iteration engine: plain orbits, the running product behind geometric
//! constants, and the log-domain orbit for doubly exponential growth.

use serde::{Deserialize, Serialize};

use crate::maps::{Family, MapError, MapKind, RecurrenceMap};
use crate::precision::Hp;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{op} needs a {expected} map, {family} is {found}")]
    WrongClassification {
        op: &'static str,
        family: Family,
        expected: MapKind,
        found: MapKind,
    },
    #[error("tail envelope needs x_n < 1/2, got x_{n} = {x_n}")]
    EnvelopeUnmet { n: u64, x_n: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

/// Requested digits plus the guard digits that absorb rounding drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub target_digits: u32,
    pub guard_digits: u32,
}

impl PrecisionPolicy {
    pub fn new(target_digits: u32, guard_digits: u32) -> Self {
        Self {
            target_digits,
            guard_digits,
        }
    }

    /// Smallest admissible guard for an orbit of length `k_max`: `15 + ceil(log10(k_max + 1))`.
    pub fn min_guard(k_max: u64) -> u32 {
        15 + ((k_max + 1) as f64).log10().ceil() as u32
    }

    pub fn auto(target_digits: u32, k_max: u64) -> Self {
        Self::new(target_digits, Self::min_guard(k_max))
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    pub fn with_doubled_guard(&self) -> Self {
        Self::new(self.target_digits, self.guard_digits * 2)
    }

    /// Raises the guard to the minimum required by `k_max` when it is below it.
    pub fn covering(&self, k_max: u64) -> Self {
        Self::new(
            self.target_digits,
            self.guard_digits.max(Self::min_guard(k_max)),
        )
    }
}

/// One point of an orbit. For doubling maps `x` is dropped once it would need
/// more than about a million digits, and only `log_x` survives.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub k: u64,
    pub x: Option<Hp>,
    pub running_product: Option<Hp>,
    pub log_x: Option<Hp>,
}

const LOG_DROP_NATS: f64 = 1.0e6 * std::f64::consts::LN_10;
const LARGE_LOG_BRANCH: f64 = 40.0;

fn product_sign(map: &RecurrenceMap) -> Option<bool> {
    match (map.kind(), map.family()) {
        (MapKind::GeometricDecay, Family::Logistic) => Some(false),
        (MapKind::GeometricDecay, Family::LogisticPlus) => Some(true),
        _ => None,
    }
}

fn require_kind(
    map: &RecurrenceMap,
    op: &'static str,
    expected: MapKind,
) -> Result<(), OrbitError> {
    if map.kind() == expected {
        Ok(())
    } else {
        Err(OrbitError::WrongClassification {
            op,
            family: map.family(),
            expected,
            found: map.kind(),
        })
    }
}

/// Iterates to `k_max`, calling `visit` on every record (index 0 included); returns the last one.
///
/// Records are streamed, not retained, so memory stays constant in `k_max`.
pub fn iterate_streaming(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    k_max: u64,
    mut visit: impl FnMut(&OrbitRecord),
) -> Result<OrbitRecord, OrbitError> {
    let digits = policy.working_digits();
    if map.kind() == MapKind::DoublingGrowth {
        let logs = doubling_log_orbit(map, policy, k_max)?;
        let stepper = map.stepper(digits);
        let mut x = Some(map.x0(digits));
        let mut last = None;
        for (k, l) in logs.into_iter().enumerate() {
            if k > 0 {
                x = match x {
                    Some(prev) if l.to_f64() < LOG_DROP_NATS => Some(stepper.step(&prev)?),
                    _ => None,
                };
            }
            let rec = OrbitRecord {
                k: k as u64,
                x: x.clone(),
                running_product: None,
                log_x: Some(l),
            };
            visit(&rec);
            last = Some(rec);
        }
        return Ok(last.expect("orbit has index 0"));
    }

    let stepper = map.stepper(digits);
    let sign = product_sign(map);
    let one = Hp::from_i64(1, digits);
    let mut x = map.x0(digits);
    let mut product = sign.map(|_| x.clone());
    for k in 0..=k_max {
        let rec = OrbitRecord {
            k,
            x: Some(x.clone()),
            running_product: product.clone(),
            log_x: None,
        };
        visit(&rec);
        if k == k_max {
            return Ok(rec);
        }
        if let (Some(plus), Some(p)) = (sign, product.as_mut()) {
            let factor = if plus { &one + &x } else { &one - &x };
            *p = &*p * &factor;
        }
        x = stepper.step(&x)?;
    }
    unreachable!()
}

/// `x_{k_max}` at working precision.
pub fn iterate(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    k_max: u64,
) -> Result<OrbitRecord, OrbitError> {
    iterate_streaming(map, policy, k_max, |_| {})
}

/// Orbit values at each of the (ascending) indices in `ks`, from a single pass.
pub fn checkpoints(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    ks: &[u64],
) -> Result<Vec<Hp>, OrbitError> {
    let k_max = ks.iter().copied().max().unwrap_or(0);
    let mut out = Vec::with_capacity(ks.len());
    iterate_streaming(map, policy, k_max, |rec| {
        if ks.contains(&rec.k) {
            out.push(rec.x.clone().expect("plain orbit"));
        }
    })?;
    Ok(out)
}

/// `P_n = x0 * prod_{j<n} (1 -/+ x_j)`, minus for logistic, plus for logistic-plus.
pub fn partial_product(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    n: u64,
) -> Result<Hp, OrbitError> {
    require_kind(map, "partial_product", MapKind::GeometricDecay)?;
    let rec = iterate(map, policy, n)?;
    Ok(rec
        .running_product
        .expect("geometric maps carry the product"))
}

/// Rigorous bound `B_n >= |ln(C / P_n)|` from the geometric envelope `x_j <= x_n rho^(j-n)`.
///
/// `sum_{j>=n} |ln(1 -/+ x_j)| <= sum x_j / (1 - x_n) <= x_n / ((1 - x_n)(1 - rho))`.
pub fn product_tail_bound(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    n: u64,
) -> Result<Hp, OrbitError> {
    let digits = policy.working_digits();
    let x_n = iterate(map, policy, n)?.x.expect("plain orbit");
    tail_bound_from(map, digits, n, &x_n)
}

pub(crate) fn tail_bound_from(
    map: &RecurrenceMap,
    digits: u32,
    n: u64,
    x_n: &Hp,
) -> Result<Hp, OrbitError> {
    require_kind(map, "product_tail_bound", MapKind::GeometricDecay)?;
    let half = Hp::from_decimal_str("0.5", digits).unwrap();
    if x_n >= &half {
        return Err(OrbitError::EnvelopeUnmet {
            n,
            x_n: x_n.to_decimal_string(12),
        });
    }
    let one = Hp::from_i64(1, digits);
    let rho = map.envelope_ratio(digits).expect("geometric");
    Ok(x_n / &((&one - x_n) * (&one - &rho)))
}

/// Default product depth: `ceil((target + 5) ln 10 / |ln rho|)`.
pub fn default_product_depth(map: &RecurrenceMap, policy: &PrecisionPolicy) -> u64 {
    let rho = map.envelope_ratio(30).map(|r| r.to_f64()).unwrap_or(0.5);
    ((policy.target_digits as f64 + 5.0) * std::f64::consts::LN_10 / rho.ln().abs()).ceil() as u64
}

/// Per-family rearrangement `L_k = 2 L_{k-1} + shift + correction(L_{k-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DoublingForm {
    /// `x -> x(1+x)`: correction `ln(1 + e^-L)`.
    LogisticPlus,
    /// `y -> y^2 - y + 1`: correction `ln(1 - e^-L + e^-2L)`.
    Sylvester,
    /// `z -> (z^2+1)/2`: shift `-ln 2`, correction `ln(1 + e^-2L)`.
    Pythagorean,
}

impl DoublingForm {
    pub(crate) fn of(map: &RecurrenceMap) -> Option<Self> {
        match map.family() {
            Family::LogisticPlus if map.kind() == MapKind::DoublingGrowth => {
                Some(Self::LogisticPlus)
            }
            Family::Sylvester => Some(Self::Sylvester),
            Family::Pythagorean => Some(Self::Pythagorean),
            _ => None,
        }
    }

    /// Constant part of the doubling step.
    pub(crate) fn shift(self, digits: u32) -> Hp {
        match self {
            Self::Pythagorean => -Hp::from_i64(2, digits).ln(),
            _ => Hp::zero(digits),
        }
    }

    /// `correction(L)`; exactly zero once `e^-L` is far below the working precision.
    pub(crate) fn correction(self, l: &Hp) -> Hp {
        let digits = l.digits();
        let negligible = (digits as f64 + 20.0) * std::f64::consts::LN_10;
        let lf = l.to_f64();
        let one = Hp::from_i64(1, digits);
        match self {
            Self::LogisticPlus | Self::Sylvester if lf > negligible => Hp::zero(digits),
            Self::Pythagorean if 2.0 * lf > negligible => Hp::zero(digits),
            Self::LogisticPlus => (&one + &(-l).exp()).ln(),
            Self::Sylvester => {
                let t = (-l).exp();
                (&(&one - &t) + &(&t * &t)).ln()
            }
            Self::Pythagorean => {
                let t = (-l).exp();
                (&one + &(&t * &t)).ln()
            }
        }
    }

    /// Upper bound on `|correction(L)|` as a base-10 logarithm; valid for `L >= 1`.
    pub(crate) fn correction_bound_log10(self, l: f64) -> f64 {
        let lg = std::f64::consts::LOG10_E;
        match self {
            Self::LogisticPlus => -l * lg,
            Self::Sylvester => 2f64.log10() - l * lg,
            Self::Pythagorean => -2.0 * l * lg,
        }
    }

    pub(crate) fn next(self, l: &Hp) -> Hp {
        let digits = l.digits();
        if self == Self::LogisticPlus && l.to_f64() <= LARGE_LOG_BRANCH {
            // L_k = L + ln(1 + x), x = e^L
            let one = Hp::from_i64(1, digits);
            return l + &(&one + &l.exp()).ln();
        }
        let two = Hp::from_i64(2, digits);
        &(&(&two * l) + &self.shift(digits)) + &self.correction(l)
    }
}

/// `L_k = ln x_k` for `k = 0..=k_max`, iterated in the log domain.
pub fn doubling_log_orbit(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    k_max: u64,
) -> Result<Vec<Hp>, OrbitError> {
    require_kind(map, "doubling_log_orbit", MapKind::DoublingGrowth)?;
    let form = DoublingForm::of(map).expect("every doubling family has a log form");
    let digits = policy.working_digits();
    let mut l = map.x0(digits).ln();
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(l.clone());
    for _ in 0..k_max {
        l = form.next(&l);
        out.push(l.clone());
    }
    Ok(out)
}

/// The correction terms `correction(L_k)` of a doubling orbit, `k = 0..k_max`.
pub fn doubling_corrections(
    map: &RecurrenceMap,
    policy: &PrecisionPolicy,
    k_max: u64,
) -> Result<Vec<Hp>, OrbitError> {
    let form = DoublingForm::of(map).ok_or(OrbitError::WrongClassification {
        op: "doubling_corrections",
        family: map.family(),
        expected: MapKind::DoublingGrowth,
        found: map.kind(),
    })?;
    Ok(doubling_log_orbit(map, policy, k_max)?
        .iter()
        .map(|l| form.correction(l))
        .collect())
}
