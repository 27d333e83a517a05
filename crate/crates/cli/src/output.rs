use std::collections::BTreeMap;
use std::fmt::Write as _;

use iterasym_core::extract::ConstantEstimate;
use iterasym_core::maps::MapSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Stable JSON shape of one estimate. Decimal values are strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub map: String,
    pub params: BTreeMap<String, String>,
    pub x0: String,
    pub method: String,
    pub name: String,
    pub value: String,
    pub certified_digits: u32,
    pub certification: String,
    pub k_used: u64,
    pub precision_digits: u32,
    pub elapsed_ms: f64,
}

impl EstimateRecord {
    pub fn new(spec: &MapSpec, e: &ConstantEstimate) -> Self {
        Self {
            map: spec.to_string(),
            params: spec
                .params()
                .into_iter()
                .filter(|(k, _)| *k != "x0")
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            x0: spec.x0.to_string(),
            method: e.method.to_string(),
            name: e.name.clone(),
            value: e.value.clone(),
            certified_digits: e.certified_digits,
            certification: e.certification.to_string(),
            k_used: e.k_used,
            precision_digits: e.precision_used,
            elapsed_ms: (e.elapsed_ms * 1000.0).round() / 1000.0,
        }
    }
}

/// Flat CSV shape of [`EstimateRecord`]; parameters are `key=value` joined by `;`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateCsvRow {
    pub map: String,
    pub params: String,
    pub x0: String,
    pub method: String,
    pub name: String,
    pub value: String,
    pub certified_digits: u32,
    pub certification: String,
    pub k_used: u64,
    pub precision_digits: u32,
    pub elapsed_ms: f64,
}

impl From<&EstimateRecord> for EstimateCsvRow {
    fn from(r: &EstimateRecord) -> Self {
        Self {
            map: r.map.clone(),
            params: r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
            x0: r.x0.clone(),
            method: r.method.clone(),
            name: r.name.clone(),
            value: r.value.clone(),
            certified_digits: r.certified_digits,
            certification: r.certification.clone(),
            k_used: r.k_used,
            precision_digits: r.precision_digits,
            elapsed_ms: r.elapsed_ms,
        }
    }
}

pub fn estimate_csv(records: &[EstimateRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(EstimateCsvRow::from(r))?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn estimate_text(r: &EstimateRecord, e: &ConstantEstimate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "map            {}", r.map);
    let _ = writeln!(s, "{:<14} {}", r.name, r.value);
    for rel in &e.related {
        let _ = writeln!(s, "{:<14} {}", rel.name, rel.value);
    }
    let _ = writeln!(
        s,
        "certified      {} digits ({})",
        r.certified_digits, r.certification
    );
    let _ = writeln!(s, "method         {}", r.method);
    let _ = writeln!(s, "depth          k = {}", r.k_used);
    let _ = writeln!(s, "working        {} digits", r.precision_digits);
    if let Some(note) = &e.note {
        let _ = writeln!(s, "note           {note}");
    }
    let _ = writeln!(s, "elapsed        {:.1} ms", r.elapsed_ms);
    s
}

/// One row of a reproduced table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub key: String,
    pub value: String,
    pub certified_digits: Option<u32>,
    pub certification: String,
    pub method: String,
    pub map: String,
    pub reference: String,
    pub matching_digits: Option<i64>,
    pub delta: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub key_header: String,
    pub value_header: String,
    pub rows: Vec<TableRow>,
}

const TABLE_TAIL: [&str; 8] = [
    "certified_digits",
    "certification",
    "method",
    "map",
    "reference",
    "matching_digits",
    "delta",
    "error",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl Table {
    pub fn headers(&self) -> Vec<String> {
        [self.key_header.as_str(), self.value_header.as_str()]
            .into_iter()
            .chain(TABLE_TAIL)
            .map(String::from)
            .collect()
    }

    fn cells(r: &TableRow) -> Vec<String> {
        vec![
            r.key.clone(),
            r.value.clone(),
            opt(&r.certified_digits),
            r.certification.clone(),
            r.method.clone(),
            r.map.clone(),
            r.reference.clone(),
            opt(&r.matching_digits),
            r.delta.clone(),
            r.error.clone(),
        ]
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.headers())?;
        for r in &self.rows {
            w.write_record(Self::cells(r))?;
        }
        finish_csv(w)
    }

    /// Parses CSV written by [`Table::to_csv`].
    pub fn from_csv(title: &str, text: &str) -> Result<Self, CliError> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let headers = rd.headers()?.clone();
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let cell = |i: usize| rec.get(i).unwrap_or_default().to_string();
            let parse_err = |e: std::num::ParseIntError| CliError::Output(e.to_string());
            rows.push(TableRow {
                key: cell(0),
                value: cell(1),
                certified_digits: match cell(2).as_str() {
                    "" => None,
                    s => Some(s.parse().map_err(parse_err)?),
                },
                certification: cell(3),
                method: cell(4),
                map: cell(5),
                reference: cell(6),
                matching_digits: match cell(7).as_str() {
                    "" => None,
                    s => Some(s.parse().map_err(parse_err)?),
                },
                delta: cell(8),
                error: cell(9),
            });
        }
        Ok(Self {
            title: title.to_string(),
            key_header: headers.get(0).unwrap_or("key").to_string(),
            value_header: headers.get(1).unwrap_or("value").to_string(),
            rows,
        })
    }

    pub fn to_text(&self) -> String {
        let show = [0usize, 1, 2, 3, 4, 6, 7, 8, 9];
        let headers = self.headers();
        let cells: Vec<Vec<String>> = self.rows.iter().map(Self::cells).collect();
        let used: Vec<usize> = show
            .into_iter()
            .filter(|&i| i < 2 || cells.iter().any(|c| !c[i].is_empty()))
            .collect();
        let width = |i: usize| {
            cells
                .iter()
                .map(|c| c[i].chars().count())
                .chain([headers[i].len()])
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = used.iter().map(|&i| width(i)).collect();
        let mut s = format!("{}\n", self.title);
        let line = |vals: Vec<&str>| {
            vals.iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        s.push_str(&line(used.iter().map(|&i| headers[i].as_str()).collect()));
        s.push('\n');
        for c in &cells {
            s.push_str(&line(used.iter().map(|&i| c[i].as_str()).collect()));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let headers = self.headers();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = serde_json::Map::new();
                for (h, v) in headers.iter().zip(Self::cells(r)) {
                    if v.is_empty() {
                        continue;
                    }
                    let value = match (h.as_str(), v.parse::<i64>()) {
                        ("certified_digits" | "matching_digits", Ok(n)) => n.into(),
                        _ => serde_json::Value::String(v),
                    };
                    obj.insert(h.clone(), value);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "title": self.title, "rows": rows })
    }
}
