//! CSV output with `#` comment lines.

use crate::error::{Error, Result};

/// Shortest round-trip decimal for an `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Default)]
pub struct Table {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), ..Self::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.comments.push(format!("{key}={value}"));
        self
    }

    pub fn row(&mut self, fields: Vec<String>) -> &mut Self {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
        self
    }

    pub fn footer(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.footer.push(format!("{key}={value}"));
        self
    }

    pub fn render(&self) -> Result<String> {
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        let mut out = String::new();
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            writer.write_record(r).map_err(io)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
        for c in &self.footer {
            out.push_str(&format!("# {c}\n"));
        }
        Ok(out)
    }
}
