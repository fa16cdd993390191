//! Row model shared by the CSV and JSON writers.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(u64),
    Num(f64),
    Text(String),
    Empty,
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Num)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Value rounded to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().unwrap_or(x)
}

impl Field {
    pub fn to_csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Num(v) => format_sig12(*v),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Field::Int(v) => Value::from(*v),
            Field::Num(v) => Number::from_f64(round_sig12(*v)).map_or(Value::Null, Value::Number),
            Field::Text(s) => Value::String(s.clone()),
            Field::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    /// Cells that produced data.
    pub valid_cells: usize,
}

pub struct Meta<'a> {
    pub command: &'a str,
    pub seed: u64,
    pub trials: usize,
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(Field::to_csv).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(table: &Table, meta: &Meta) -> String {
    let results: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(c, f)| (c.to_string(), f.to_json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "meta": {
            "command": meta.command,
            "seed": meta.seed,
            "trials": meta.trials,
            "version": env!("CARGO_PKG_VERSION"),
            "notes": table.notes,
        },
        "results": results,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
