//! Deterministic CSV: UTF-8, LF line endings, a header row, floats in
//! `{:.16e}` (17 significant digits), and `# key=value` footer lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    /// Bare identifier-like text; must not contain commas or line breaks.
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Default)]
pub struct Table {
    columns: usize,
    body: String,
    footer: Vec<(String, String)>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut body = header.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",");
        body.push('\n');
        Self { columns: header.len(), body, footer: Vec::new() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "row width must match the header");
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            match c {
                Cell::Float(v) => self.body.push_str(&format_float(*v)),
                Cell::Int(v) => write!(self.body, "{v}").expect("write to String"),
                Cell::Text(v) => self.body.push_str(v),
            }
        }
        self.body.push('\n');
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.footer.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = self.body.clone();
        for (k, v) in &self.footer {
            writeln!(out, "# {k}={v}").expect("write to String");
        }
        out
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        let text = self.render();
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => {
                use std::io::Write;
                std::io::stdout().lock().write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}
