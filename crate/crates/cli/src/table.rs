//! Table assembly and the two output encodings.
//!
//! CSV cells carry 12 significant digits with a `.` decimal separator and
//! scientific notation below 1e-3, so printed values parse back exactly
//! to the displayed precision. Text mode aligns the same cells.

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: Vec<S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "ragged table row");
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.headers.join(","))?;
                for row in &self.rows {
                    writeln!(out, "{}", row.join(","))?;
                }
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let line = |cells: &[String], out: &mut dyn Write| -> std::io::Result<()> {
                    let mut first = true;
                    for (w, cell) in widths.iter().zip(cells) {
                        if !first {
                            write!(out, "  ")?;
                        }
                        write!(out, "{cell:>w$}", w = w)?;
                        first = false;
                    }
                    writeln!(out)
                };
                line(&self.headers, out)?;
                for row in &self.rows {
                    line(row, out)?;
                }
            }
        }
        Ok(())
    }
}

/// 12 significant digits; scientific notation for |v| < 1e-3 or when the
/// integer part alone exceeds 12 digits.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a < 1e-3 || a >= 1e12 {
        format!("{v:.11e}")
    } else {
        let mag = a.log10().floor() as i32;
        let decimals = (11 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    }
}
