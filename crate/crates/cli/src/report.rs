//! Row model and the two output encodings.
//!
//! Reals are written with 17 significant digits, which is enough for every
//! `f64` to survive a print/parse round trip. Rationals are written as `p/q`
//! strings so that exact results never pass through floating point.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Int(i128),
    Real(f64),
    /// A real known to be a probability; clamped to `[0, 1]` when written.
    Prob(f64),
    Rational(BigRational),
    Bool(bool),
    Text(String),
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v.into())
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i128)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<BigRational> for Value {
    fn from(v: BigRational) -> Self {
        Value::Rational(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// One record of output. Columns not set are written as null / empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportRow(BTreeMap<String, Value>);

impl ReportRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Csv,
}

/// `%.17g`: shortest of fixed and scientific notation at 17 significant
/// digits, trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_owned()),
            sign,
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

impl Value {
    /// The text written into a CSV cell.
    pub fn to_field(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Int(v) => v.to_string(),
            Value::Real(x) => format_real(*x),
            Value::Prob(p) => format_real(p.clamp(0.0, 1.0)),
            Value::Rational(r) => r.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> String {
        match self {
            Value::Null => "null".into(),
            Value::Int(_) | Value::Bool(_) => self.to_field(),
            Value::Real(x) | Value::Prob(x) if x.is_finite() => self.to_field(),
            // non-finite reals and all exact values travel as strings
            _ => serde_json::to_string(&self.to_field()).expect("string encoding"),
        }
    }
}

/// Reads a field back given the kind of value the column holds.
pub fn parse_field(kind: &Value, field: &str) -> Option<Value> {
    if field.is_empty() && !matches!(kind, Value::Text(_)) {
        return Some(Value::Null);
    }
    Some(match kind {
        Value::Null => Value::Null,
        Value::Int(_) => Value::Int(field.parse().ok()?),
        Value::Real(_) => Value::Real(parse_real(field)?),
        Value::Prob(_) => Value::Prob(parse_real(field)?),
        Value::Rational(_) => Value::Rational(
            BigRational::from_str(field)
                .ok()
                .or_else(|| BigInt::from_str(field).ok().map(BigRational::from_integer))?,
        ),
        Value::Bool(_) => Value::Bool(field.parse().ok()?),
        Value::Text(_) => Value::Text(field.to_owned()),
    })
}

fn parse_real(field: &str) -> Option<f64> {
    match field {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => field.parse().ok(),
    }
}

/// Writes `rows` under the fixed column list `columns`.
///
/// JSON lines carry every column, with keys sorted; CSV carries a header row
/// even when there are no data rows.
pub fn emit_report<W: Write>(
    out: W,
    columns: &[&str],
    rows: &[ReportRow],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::JsonLines => {
            let mut out = io::BufWriter::new(out);
            let mut sorted: Vec<&str> = columns.to_vec();
            sorted.sort_unstable();
            for row in rows {
                let fields: Vec<String> = sorted
                    .iter()
                    .map(|c| {
                        let v = row.get(c).unwrap_or(&Value::Null);
                        format!("{}:{}", serde_json::to_string(c).expect("key"), v.to_json())
                    })
                    .collect();
                writeln!(out, "{{{}}}", fields.join(","))?;
            }
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(columns)?;
            for row in rows {
                w.write_record(
                    columns
                        .iter()
                        .map(|c| row.get(c).unwrap_or(&Value::Null).to_field()),
                )?;
            }
            w.flush()
        }
    }
}
