//! Published values of the constants, used as test expectations and by `verify`.
//!
//! Decimal strings are truncated, not rounded, so a computed value matches
//! one when it agrees on every printed digit.

/// `x -> p x (1 - x)`, `x0 = 1/2`: `(p, C)`; `p = 1` uses `C = -lim k^2 (x_k - 1/k + ln(k)/k^2)`.
pub const LOGISTIC: &[(&str, &str)] = &[
    ("1/5", "0.234690787230465"),
    ("1/4", "0.229832778573153"),
    ("1/3", "0.220577540168322"),
    ("2/5", "0.211947268934865"),
    ("1/2", "0.196453426377889"),
    ("3/5", "0.176983588618567"),
    ("2/3", "0.161059687971223"),
    ("3/4", "0.136649472578135"),
    ("4/5", "0.118823329484862"),
    ("1", "1.767993786136154"),
];

/// `x -> p x (1 + x)`, `x0 = (1-p)/(2p)`: `(p, C)`; `p = 1` is `lim x_k^(2^-k)` from `x0 = 1`.
pub const LOGISTIC_PLUS: &[(&str, &str)] = &[
    ("1/5", "24.539007835941751"),
    ("1/4", "13.119009853937092"),
    ("1/3", "5.896477923507413"),
    ("2/5", "3.529895194705441"),
    ("1/2", "1.832010583354543"),
    ("3/5", "1.015970842139591"),
    ("2/3", "0.690744393761287"),
    ("3/4", "0.415551960439528"),
    ("4/5", "0.295525160728184"),
    ("1", "1.597910218031873"),
];

/// `lim y_k^(2^(-k-1))` for Sylvester's sequence.
pub const SYLVESTER_SQRT_C: &str = "1.264084735305301";

/// `x -> x (1 - sqrt x)`: `(x0, C)`.
pub const SQRT_MAP: &[(&str, &str)] = &[
    ("1/2", "1.98803983644549695008812308629512"),
    ("4/9", "1.96846882098495471088450855794395"),
];

/// `c(q) = C(q)/q` for `x -> x + x^(1-q)`.
pub const POWER_SUM_C: &[(&str, &str)] = &[
    ("2", "0.8615711875687117305317813"),
    ("3", "1.3784186157718345713984647"),
    ("3/2", "0.8010888849039666437110775"),
];

/// `c(2) / sqrt(2)`.
pub const C2_OVER_SQRT2: &str = "0.6092228292047829402293060";

/// Number of significant digits printed in a reference string.
pub fn printed_digits(s: &str) -> u32 {
    s.chars()
        .filter(char::is_ascii_digit)
        .skip_while(|c| *c == '0')
        .count() as u32
}

pub fn lookup<'a>(table: &'a [(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    table.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}
