//! Deterministic report assembly: one tabular model rendered as
//! RFC-4180-style CSV, a `{meta, rows}` JSON document, or an aligned text
//! table.
//!
//! Floats print with 12 significant digits in a fixed locale-free format,
//! so identical runs produce byte-identical output. No timestamps or
//! environment data enter a report.

use serde_json::{json, Map, Value};

use crate::growth::{GrowthClass, GrowthEstimate};

/// Format a float with 12 significant digits: plain decimal notation for
/// moderate magnitudes, scientific otherwise, trailing zeros trimmed.
/// Non-finite values print as `inf`, `-inf`, `nan`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_decimal(&format!("{v:.decimals$}"))
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_decimal(mantissa), exponent)
    }
}

fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One table cell, typed so CSV and JSON renderings both come out right.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => csv_quote(s),
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // JSON has no literals for non-finite numbers; fall back to
            // the same strings the CSV uses
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(fmt_float(*v))),
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            other => other.csv(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A report: named columns, rows of cells, and key/value metadata that
/// goes into the JSON `meta` object (and prefixes the text rendering).
#[derive(Clone, Debug, Default)]
pub struct Report {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    meta: Vec<(String, Value)>,
}

impl Report {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Report {
        Report {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: Value) -> &mut Self {
        self.meta.push((key.to_string(), value));
        self
    }

    /// Append a row; it must match the column count.
    pub fn push(&mut self, row: Vec<Cell>) -> &mut Self {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width mismatch: {} cells for {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
        self
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| csv_quote(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self.meta.iter().cloned().collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.clone(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({ "meta": Value::Object(meta), "rows": rows })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned text table preceded by the metadata lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let shown = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.as_f64().map(fmt_float).unwrap_or_else(|| n.to_string()),
                other => other.to_string(),
            };
            out.push_str(&format!("{k} = {shown}\n"));
        }
        if !self.meta.is_empty() && !self.rows.is_empty() {
            out.push('\n');
        }
        if self.rows.is_empty() {
            return out;
        }
        let mut widths: Vec<usize> = self.columns.iter().map(String::len).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::text).collect())
            .collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<String>| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&line(self.columns.clone()));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in rendered {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// Column names of the flat growth-estimate schema.
pub fn estimate_columns() -> [&'static str; 5] {
    ["class", "value", "sup_tail", "inf_tail", "slope"]
}

/// Cells of the flat growth-estimate schema. `value` is filled only when
/// the estimate collapses to a point (converged with coinciding tails).
pub fn estimate_cells(est: &GrowthEstimate) -> Vec<Cell> {
    let mut cells = vec![Cell::from(est.class.label())];
    let spread_tol = 1.0e-9 * est.limsup.abs().max(1.0);
    let collapsed = est.converged
        && matches!(
            est.class,
            GrowthClass::Zero | GrowthClass::Unit | GrowthClass::Finite
        )
        && (est.limsup - est.liminf).abs() <= spread_tol;
    cells.push(if collapsed {
        Cell::Float(est.limsup)
    } else {
        Cell::Empty
    });
    cells.push(Cell::Float(est.limsup));
    cells.push(Cell::Float(est.liminf));
    cells.push(Cell::Float(est.slope));
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::GrowthClass;

    #[test]
    fn float_formatting_is_canonical() {
        assert_eq!(fmt_float(3.0), "3");
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(-1.5), "-1.5");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(1.23456789e20), "1.23456789e20");
        assert_eq!(fmt_float(2.5e-7), "2.5e-7");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(0.0), "0");
        // twelve significant digits survive
        assert_eq!(fmt_float(1.23456789012e2), "123.456789012");
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut r = Report::new(["name", "v"]);
        r.push(vec![Cell::from("plain"), Cell::from(1.0)]);
        r.push(vec![Cell::from("a,b \"c\""), Cell::from(2.0)]);
        let csv = r.to_csv();
        assert_eq!(csv, "name,v\nplain,1\n\"a,b \"\"c\"\"\",2\n");
    }

    #[test]
    fn json_has_meta_and_rows() {
        let mut r = Report::new(["x"]);
        r.meta("command", serde_json::json!("order"));
        r.push(vec![Cell::Float(f64::INFINITY)]);
        r.push(vec![Cell::Empty]);
        let v = r.to_json();
        assert_eq!(v["meta"]["command"], "order");
        assert_eq!(v["rows"][0]["x"], "inf");
        assert!(v["rows"][1]["x"].is_null());
    }

    #[test]
    fn estimate_cells_expose_a_value_only_when_collapsed() {
        let collapsed = GrowthEstimate {
            class: GrowthClass::Finite,
            limsup: 3.0,
            liminf: 3.0,
            slope: 0.0,
            absorbed: false,
            converged: true,
        };
        let cells = estimate_cells(&collapsed);
        assert!(matches!(cells[1], Cell::Float(v) if v == 3.0));
        let split = GrowthEstimate {
            liminf: 1.5,
            ..collapsed
        };
        assert!(matches!(estimate_cells(&split)[1], Cell::Empty));
    }
}
