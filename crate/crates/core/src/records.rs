//! Self-describing tabular output.
//!
//! CSV files start with `# key: value` provenance lines followed by a header
//! row; JSON files hold the same content as `{provenance, columns, rows}`.
//! Non-finite cells are written as `NaN` in CSV and `null` in JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub provenance: BTreeMap<String, String>,
    pub columns: Vec<String>,
    #[serde(with = "nullable_rows")]
    pub rows: Vec<Vec<f64>>,
}

mod nullable_rows {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<Option<f64>>> =
            rows.iter().map(|r| r.iter().map(|&x| x.is_finite().then_some(x)).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let v: Vec<Vec<Option<f64>>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

impl OutputRecord {
    pub fn new(columns: Vec<String>) -> Self {
        Self { provenance: BTreeMap::new(), columns, rows: Vec::new() }
    }

    pub fn with_provenance(mut self, key: &str, value: impl ToString) -> Self {
        self.provenance.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::ShapeMismatch(format!("row has {} cells, expected {}", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    fn validate(&self) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::Parse("record has no columns".into()));
        }
        for (k, v) in &self.provenance {
            if k.is_empty() || k.contains(':') || k.contains('\n') || v.contains('\n') || k.trim() != k || v.trim() != v
            {
                return Err(Error::Parse(format!("provenance entry {k:?} cannot be represented")));
            }
        }
        if let Some(r) = self.rows.iter().find(|r| r.len() != self.columns.len()) {
            return Err(Error::Parse(format!("row has {} cells, expected {}", r.len(), self.columns.len())));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        for (k, v) in &self.provenance {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| Error::Parse(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string())).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| Error::Parse(e.to_string()))?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut provenance = BTreeMap::new();
        let mut rest = text;
        while let Some(line) = rest.strip_prefix("# ") {
            let (line, tail) = match line.find('\n') {
                Some(i) => (&line[..i], &line[i + 1..]),
                None => (line, ""),
            };
            let (k, v) = line
                .split_once(": ")
                .or_else(|| line.strip_suffix(':').map(|k| (k, "")))
                .ok_or_else(|| Error::Parse(format!("malformed provenance line {line:?}")))?;
            provenance.insert(k.to_string(), v.to_string());
            rest = tail;
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
        let columns: Vec<String> =
            r.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let row = rec
                .iter()
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("cell {c:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let rec = Self { provenance, columns, rows };
        rec.validate()?;
        Ok(rec)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        rec.validate()?;
        Ok(rec)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }
}
