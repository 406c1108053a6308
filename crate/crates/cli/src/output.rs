//! Rendering of exact results. Rationals always leave as `"p/q"` strings;
//! decimals only appear when asked for, with a stated precision.

use clap::ValueEnum;
use dcwalk::exact::{format_rational, to_f64, Rational};
use dcwalk::linalg::Matrix;
use dcwalk::shuffle::latex_bottom_right;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

pub fn q(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn qs(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn qm(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|r| qs(r)).collect())
}

/// `{"exact": "p/q", "decimal": "0.123…"}` when a precision is set.
pub fn q_with_decimal(v: &Rational, precision: Option<usize>) -> Value {
    match precision {
        Some(p) => json!({ "exact": format_rational(v), "decimal": format!("{:.*}", p, to_f64(v)) }),
        None => q(v),
    }
}

pub fn reversed<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().rev().cloned().collect()
}

pub fn csv_matrix(labels: &[String], m: &Matrix) -> String {
    let mut out = String::from("from");
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(m) {
        out.push_str(l);
        for v in row {
            out.push(',');
            out.push_str(&format_rational(v));
        }
        out.push('\n');
    }
    out
}

pub fn table_matrix(labels: &[String], m: &Matrix) -> String {
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| if num_traits::Zero::is_zero(v) { "·".to_string() } else { format_rational(v) })
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .chain(labels.iter().map(|l| l.chars().count()))
        .max()
        .unwrap_or(1);
    let label_width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
    let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w.saturating_sub(s.chars().count())));
    let mut out = pad("", label_width);
    for l in labels {
        out.push_str("  ");
        out.push_str(&pad(l, width));
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(&cells) {
        out.push_str(&pad(l, label_width));
        for c in row {
            out.push_str("  ");
            out.push_str(&pad(c, width));
        }
        out.push('\n');
    }
    out
}

/// Matrix in the requested text format. `m` must already be in the
/// orientation to print, except for LaTeX, which always takes an
/// ascending-index matrix and emits the bottom-right layout.
pub fn render_matrix(format: Format, labels: &[String], m: &Matrix, ascending: &Matrix) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json!({ "labels": labels, "matrix": qm(m) }))
            .expect("serialisable"),
        Format::Csv => csv_matrix(labels, m),
        Format::Table => table_matrix(labels, m),
        Format::Latex => latex_bottom_right(ascending),
    }
}
