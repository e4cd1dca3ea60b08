//! Report rows and their CSV/JSON encodings.
//!
//! Every float is written twice: as the shortest round-trip decimal and as a
//! hex float. Parsing reads the hex column, so a report read back reproduces
//! the exact bits even for NaN and infinities.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::hexfloat::{format_hex, parse_hex, shortest, truncate_significant};
use super::HarnessError;
use crate::fpbits::Precision;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: String,
    pub series: String,
    pub n: usize,
    pub precision: Precision,
    pub order: String,
    pub result: f64,
    pub oracle_result: f64,
    pub relative_error: f64,
    pub wall_time_ns: u64,
    pub max_recursion_level: Option<usize>,
    pub histogram: Option<Vec<u64>>,
    pub overflow: bool,
    pub saw_nan: bool,
}

impl ReportRow {
    /// Equality on bit patterns, so NaN fields compare equal to themselves.
    pub fn bit_identical(&self, other: &ReportRow) -> bool {
        let same = |a: f64, b: f64| a.to_bits() == b.to_bits();
        self.algorithm == other.algorithm
            && self.series == other.series
            && self.n == other.n
            && self.precision == other.precision
            && self.order == other.order
            && same(self.result, other.result)
            && same(self.oracle_result, other.oracle_result)
            && same(self.relative_error, other.relative_error)
            && self.wall_time_ns == other.wall_time_ns
            && self.max_recursion_level == other.max_recursion_level
            && self.histogram == other.histogram
            && self.overflow == other.overflow
            && self.saw_nan == other.saw_nan
    }
}

/// Best and worst rows of a comparison, by relative error. NaN counts as worst.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub best: String,
    pub best_relative_error: f64,
    pub worst: String,
    pub worst_relative_error: f64,
}

impl Summary {
    pub fn of(rows: &[ReportRow]) -> Option<Summary> {
        let key = |r: &ReportRow| {
            if r.relative_error.is_nan() {
                f64::INFINITY
            } else {
                r.relative_error
            }
        };
        let best = rows.iter().min_by(|a, b| key(a).total_cmp(&key(b)))?;
        let worst = rows.iter().max_by(|a, b| {
            key(a)
                .total_cmp(&key(b))
                .then(a.relative_error.is_nan().cmp(&b.relative_error.is_nan()))
        })?;
        Some(Summary {
            best: best.algorithm.clone(),
            best_relative_error: best.relative_error,
            worst: worst.algorithm.clone(),
            worst_relative_error: worst.relative_error,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

const CSV_HEADER: [&str; 16] = [
    "algorithm",
    "series",
    "n",
    "precision",
    "order",
    "result",
    "result_hex",
    "oracle_result",
    "oracle_hex",
    "relative_error",
    "relative_error_hex",
    "wall_time_ns",
    "max_recursion_level",
    "histogram",
    "overflow",
    "saw_nan",
];

fn histogram_text(h: &Option<Vec<u64>>) -> String {
    match h {
        Some(h) => h.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        None => String::new(),
    }
}

/// CSV report. With `digits`, an extra `result_digits` column holds the result
/// cut to that many significant digits. A summary, if any, follows as `#` lines.
pub fn to_csv(
    rows: &[ReportRow],
    summary: Option<&Summary>,
    digits: Option<usize>,
) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if digits.is_some() {
        header.push("result_digits");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.algorithm.clone(),
            r.series.clone(),
            r.n.to_string(),
            r.precision.to_string(),
            r.order.clone(),
            shortest(r.result),
            format_hex(r.result),
            shortest(r.oracle_result),
            format_hex(r.oracle_result),
            shortest(r.relative_error),
            format_hex(r.relative_error),
            r.wall_time_ns.to_string(),
            r.max_recursion_level
                .map(|l| l.to_string())
                .unwrap_or_default(),
            histogram_text(&r.histogram),
            r.overflow.to_string(),
            r.saw_nan.to_string(),
        ];
        if let Some(d) = digits {
            rec.push(truncate_significant(r.result, d));
        }
        w.write_record(&rec)?;
    }
    let mut out = String::from_utf8(
        w.into_inner()
            .map_err(|e| HarnessError::BadReport(e.to_string()))?,
    )
    .expect("csv output is UTF-8");
    if let Some(s) = summary {
        out.push_str(&format!(
            "# best,{},{}\n# worst,{},{}\n",
            s.best,
            shortest(s.best_relative_error),
            s.worst,
            shortest(s.worst_relative_error)
        ));
    }
    Ok(out)
}

fn json_float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// JSON report: `{"rows": [...], "summary": {...}|null}`. Non-finite decimals
/// are `null`; the `*_hex` fields always carry the value.
pub fn to_json(rows: &[ReportRow], summary: Option<&Summary>, digits: Option<usize>) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = json!({
                "algorithm": r.algorithm,
                "series": r.series,
                "n": r.n,
                "precision": r.precision,
                "order": r.order,
                "result": json_float(r.result),
                "result_hex": format_hex(r.result),
                "oracle_result": json_float(r.oracle_result),
                "oracle_hex": format_hex(r.oracle_result),
                "relative_error": json_float(r.relative_error),
                "relative_error_hex": format_hex(r.relative_error),
                "wall_time_ns": r.wall_time_ns,
                "max_recursion_level": r.max_recursion_level,
                "histogram": r.histogram,
                "overflow": r.overflow,
                "saw_nan": r.saw_nan,
            });
            if let Some(d) = digits {
                v["result_digits"] = json!(truncate_significant(r.result, d));
            }
            v
        })
        .collect();
    let summary = summary.map(|s| {
        json!({
            "best": s.best,
            "best_relative_error": json_float(s.best_relative_error),
            "worst": s.worst,
            "worst_relative_error": json_float(s.worst_relative_error),
        })
    });
    let doc = json!({ "rows": rows, "summary": summary });
    let mut out = serde_json::to_string_pretty(&doc).expect("report is serializable");
    out.push('\n');
    out
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::BadReport(msg.into())
}

fn hex_field(text: &str, name: &str) -> Result<f64, HarnessError> {
    parse_hex(text).ok_or_else(|| bad(format!("bad hex float in `{name}`: {text}")))
}

/// Check that the decimal column agrees with the hex column bit for bit.
fn check_decimal(decimal: Option<f64>, hex: f64, name: &str) -> Result<(), HarnessError> {
    match decimal {
        Some(d) if d.to_bits() != hex.to_bits() && !(d.is_nan() && hex.is_nan()) => {
            Err(bad(format!("`{name}` decimal and hex columns disagree")))
        }
        _ => Ok(()),
    }
}

fn parse_histogram(text: &str) -> Result<Option<Vec<u64>>, HarnessError> {
    if text.is_empty() {
        return Ok(None);
    }
    text.split(';')
        .map(|c| {
            c.parse()
                .map_err(|_| bad(format!("bad histogram `{text}`")))
        })
        .collect::<Result<Vec<u64>, _>>()
        .map(Some)
}

pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let idx: Vec<usize> = CSV_HEADER
        .iter()
        .map(|h| col(h))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(idx[i]).unwrap_or("");
        let float = |dec: usize, hex: usize| -> Result<f64, HarnessError> {
            let h = hex_field(f(hex), CSV_HEADER[hex])?;
            check_decimal(f(dec).parse().ok(), h, CSV_HEADER[dec])?;
            Ok(h)
        };
        let int = |i: usize| {
            f(i).parse::<u64>()
                .map_err(|_| bad(format!("bad `{}`", CSV_HEADER[i])))
        };
        let flag = |i: usize| {
            f(i).parse::<bool>()
                .map_err(|_| bad(format!("bad `{}`", CSV_HEADER[i])))
        };
        rows.push(ReportRow {
            algorithm: f(0).to_string(),
            series: f(1).to_string(),
            n: int(2)? as usize,
            precision: f(3).parse().map_err(bad)?,
            order: f(4).to_string(),
            result: float(5, 6)?,
            oracle_result: float(7, 8)?,
            relative_error: float(9, 10)?,
            wall_time_ns: int(11)?,
            max_recursion_level: if f(12).is_empty() {
                None
            } else {
                Some(int(12)? as usize)
            },
            histogram: parse_histogram(f(13))?,
            overflow: flag(14)?,
            saw_nan: flag(15)?,
        });
    }
    Ok(rows)
}

pub fn parse_json(text: &str) -> Result<Vec<ReportRow>, HarnessError> {
    let doc: Value = serde_json::from_str(text)?;
    let rows = doc["rows"]
        .as_array()
        .ok_or_else(|| bad("missing `rows` array"))?;
    rows.iter().map(parse_json_row).collect()
}

fn parse_json_row(v: &Value) -> Result<ReportRow, HarnessError> {
    let s = |k: &str| {
        v[k].as_str()
            .map(str::to_string)
            .ok_or_else(|| bad(format!("missing `{k}`")))
    };
    let u = |k: &str| v[k].as_u64().ok_or_else(|| bad(format!("missing `{k}`")));
    let b = |k: &str| v[k].as_bool().ok_or_else(|| bad(format!("missing `{k}`")));
    let float = |dec: &str, hex: &str| -> Result<f64, HarnessError> {
        let h = hex_field(&s(hex)?, hex)?;
        check_decimal(v[dec].as_f64(), h, dec)?;
        Ok(h)
    };
    Ok(ReportRow {
        algorithm: s("algorithm")?,
        series: s("series")?,
        n: u("n")? as usize,
        precision: s("precision")?.parse().map_err(bad)?,
        order: s("order")?,
        result: float("result", "result_hex")?,
        oracle_result: float("oracle_result", "oracle_hex")?,
        relative_error: float("relative_error", "relative_error_hex")?,
        wall_time_ns: u("wall_time_ns")?,
        max_recursion_level: v["max_recursion_level"].as_u64().map(|l| l as usize),
        histogram: serde_json::from_value(v["histogram"].clone())?,
        overflow: b("overflow")?,
        saw_nan: b("saw_nan")?,
    })
}

/// Parse a report in either encoding, deciding by its first character.
pub fn parse_report(text: &str) -> Result<Vec<ReportRow>, HarnessError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}
