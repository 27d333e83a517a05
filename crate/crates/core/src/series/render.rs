//! Text, JSON and LaTeX renderings of a series.

use serde::{Deserialize, Serialize};

use super::{AsymptoticSeries, CoeffPoly, TermKey};
use crate::exact::{fmt_rational, parse_rational, ParseExactError, Rational};

/// One term in the JSON interchange form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub alpha: String,
    pub ln_power: u32,
    pub coeff: Vec<String>,
}

pub fn to_json_terms(s: &AsymptoticSeries) -> Vec<JsonTerm> {
    s.terms()
        .map(|(k, c)| JsonTerm {
            alpha: fmt_rational(&k.alpha),
            ln_power: k.ln_power,
            coeff: c.coeffs().iter().map(fmt_rational).collect(),
        })
        .collect()
}

pub fn from_json_terms(
    terms: &[JsonTerm],
    trunc: Rational,
) -> Result<AsymptoticSeries, ParseExactError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let alpha = parse_rational(&t.alpha)?;
        let coeffs = t
            .coeff
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((
            TermKey::new(alpha, t.ln_power),
            CoeffPoly::from_coeffs(coeffs),
        ));
    }
    Ok(AsymptoticSeries::from_terms(out, trunc))
}

pub fn to_json(s: &AsymptoticSeries) -> serde_json::Value {
    serde_json::json!({
        "truncation_order": fmt_rational(s.truncation()),
        "terms": to_json_terms(s),
    })
}

fn power_text(alpha: &Rational) -> String {
    let a = fmt_rational(alpha);
    if a == "1" {
        "k".to_string()
    } else if a.contains('/') {
        format!("k^({a})")
    } else {
        format!("k^{a}")
    }
}

fn scale_text(k: &TermKey) -> String {
    let ln = match k.ln_power {
        0 => String::new(),
        1 => "ln(k)".to_string(),
        m => format!("ln(k)^{m}"),
    };
    let zero = Rational::from_integer(0.into());
    if k.alpha < zero {
        let pw = power_text(&-&k.alpha);
        return if ln.is_empty() {
            pw
        } else {
            format!("{ln}*{pw}")
        };
    }
    let pw = if k.alpha == zero {
        String::new()
    } else {
        power_text(&k.alpha)
    };
    match (ln.is_empty(), pw.is_empty()) {
        (true, true) => "1".to_string(),
        (false, true) => ln,
        (true, false) => format!("1/{pw}"),
        (false, false) => format!("{ln}/{pw}"),
    }
}

/// One line per term, largest scale first, followed by the order of the first unknown term.
pub fn to_text(s: &AsymptoticSeries) -> String {
    let mut out = String::new();
    for (k, c) in s.terms() {
        let coeff = c.to_string();
        let coeff = if c.coeffs().len() > 1
            && c.coeffs()
                .iter()
                .filter(|x| **x != Rational::from_integer(0.into()))
                .count()
                > 1
        {
            format!("({coeff})")
        } else {
            coeff
        };
        out.push_str(&format!("{coeff} * {}\n", scale_text(k)));
    }
    out.push_str(&format!(
        "+ O(ln(k)^M / k^({}))\n",
        fmt_rational(s.truncation())
    ));
    out
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_poly(c: &CoeffPoly) -> String {
    let zero = Rational::from_integer(0.into());
    let mut parts = Vec::new();
    for (i, a) in c.coeffs().iter().enumerate().rev() {
        if *a == zero {
            continue;
        }
        let neg = *a < zero;
        let mag = if neg { -a } else { a.clone() };
        let sym = match i {
            0 => String::new(),
            1 => "C".to_string(),
            n => format!("C^{{{n}}}"),
        };
        let body = if i > 0 && mag == Rational::from_integer(1.into()) {
            sym
        } else {
            format!("{}{}", latex_rational(&mag), sym)
        };
        parts.push((neg, body));
    }
    let mut s = String::new();
    for (n, (neg, body)) in parts.iter().enumerate() {
        if n == 0 {
            if *neg {
                s.push('-');
            }
        } else {
            s.push_str(if *neg { " - " } else { " + " });
        }
        s.push_str(body);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

pub fn to_latex(s: &AsymptoticSeries) -> String {
    let mut parts = Vec::new();
    for (k, c) in s.terms() {
        let ln = match k.ln_power {
            0 => String::new(),
            1 => "\\ln k".to_string(),
            m => format!("\\ln^{{{m}}} k"),
        };
        let zero = Rational::from_integer(0.into());
        let den = if k.alpha > zero {
            format!("k^{{{}}}", fmt_rational(&k.alpha))
        } else {
            String::new()
        };
        let mut num = format!("\\left({}\\right){ln}", latex_poly(c));
        if k.alpha < zero {
            num.push_str(&format!(" k^{{{}}}", fmt_rational(&-&k.alpha)));
        }
        parts.push(if den.is_empty() {
            num
        } else {
            format!("\\frac{{{num}}}{{{den}}}")
        });
    }
    parts.push(format!(
        "O\\!\\left(\\frac{{\\ln^M k}}{{k^{{{}}}}}\\right)",
        fmt_rational(s.truncation())
    ));
    parts.join(" + ")
}
