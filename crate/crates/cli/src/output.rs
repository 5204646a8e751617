//! Record tables rendered as CSV or JSON, and a minimal SVG writer.

use std::fmt::Write as _;

use cantor_core::{format_rational, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Field {
    Exact(Rational),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<Rational> for Field {
    fn from(r: Rational) -> Self {
        Field::Exact(r)
    }
}

impl From<&Rational> for Field {
    fn from(r: &Rational) -> Self {
        Field::Exact(r.clone())
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

macro_rules! int_field {
    ($($t:ty),*) => {$(
        impl From<$t> for Field {
            fn from(n: $t) -> Self {
                Field::Int(n as i64)
            }
        }
    )*};
}
int_field!(u32, u64, usize, i64);

/// Rounded decimal for presentation; 12 significant digits.
pub fn decimal(r: &Rational) -> String {
    let x = r.to_f64().unwrap_or(f64::NAN);
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Exact columns that would get a `_rounded` companion.
    fn exact_columns(&self) -> Vec<bool> {
        (0..self.columns.len())
            .map(|c| self.rows.iter().any(|r| matches!(r[c], Field::Exact(_))))
            .collect()
    }

    pub fn to_csv(&self, decimals: bool) -> String {
        let exact = self.exact_columns();
        let mut header = Vec::new();
        for (c, name) in self.columns.iter().enumerate() {
            header.push(name.clone());
            if decimals && exact[c] {
                header.push(format!("{name}_rounded"));
            }
        }
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut cells = Vec::new();
            for (c, field) in row.iter().enumerate() {
                cells.push(match field {
                    Field::Exact(r) => format_rational(r),
                    Field::Int(n) => n.to_string(),
                    Field::Bool(b) => b.to_string(),
                    Field::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Field::Text(s) => s.clone(),
                });
                if decimals && exact[c] {
                    cells.push(match field {
                        Field::Exact(r) => decimal(r),
                        _ => String::new(),
                    });
                }
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_rows(&self, decimals: bool) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, field) in self.columns.iter().zip(row) {
                    let v = match field {
                        Field::Exact(r) => {
                            if decimals {
                                obj.insert(format!("{name}_rounded"), json!(decimal(r)));
                            }
                            json!(format_rational(r))
                        }
                        Field::Int(n) => json!(n),
                        Field::Bool(b) => json!(b),
                        Field::Text(s) => json!(s),
                    };
                    obj.insert(name.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// Unit-viewport SVG; callers pass data coordinates in `[0, 1]^2`, y up.
pub struct Svg {
    body: String,
}

impl Svg {
    pub fn new() -> Self {
        Svg { body: String::new() }
    }

    fn y(y: &Rational) -> String {
        decimal(&(Rational::from_integer(1.into()) - y))
    }

    pub fn polyline(&mut self, points: &[(Rational, Rational)], stroke: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", decimal(x), Svg::y(y)))
            .collect();
        let _ = writeln!(
            self.body,
            "  <polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"0.003\" points=\"{}\"/>",
            pts.join(" ")
        );
    }

    /// Axis-aligned rectangle from lower-left `(x0, y0)` to upper-right `(x1, y1)`.
    pub fn rect(&mut self, x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, fill: &str) {
        let _ = writeln!(
            self.body,
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.001\"/>",
            decimal(x0),
            Svg::y(y1),
            decimal(&(x1 - x0)),
            decimal(&(y1 - y0))
        );
    }

    pub fn dot(&mut self, x: &Rational, y: &Rational, fill: &str) {
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"0.006\" fill=\"{fill}\"/>",
            decimal(x),
            Svg::y(y)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.05 -0.05 1.1 1.1\" width=\"640\" height=\"640\">\n\
             <!-- unit viewport, y up; coordinates rounded to 12 significant digits -->\n{}</svg>\n",
            self.body
        )
    }
}
