//! TOML run configuration. Every field is optional; command-line flags win.
//!
//! ```toml
//! preset = "mori-mukai-2.23"        # or: geometry = ["2", "3", "4", 1]
//! direction = ["1", "-1"]
//! logDiscrepancy = "1"
//! cone = [["0", "1"], ["1", "0"]]
//! sampleStep = "1/8"
//! table = "families.csv"
//! query = { b2 = 2, b3 = 2, degree = "30" }
//!
//! [pencil]
//! preset = "subfamily-a"            # or fq / fh / fqp as rational arrays
//! ```

use std::path::{Path, PathBuf};

use kstab_core::arith::{int, parse_rational, Rational};
use kstab_core::autforms::{PencilConfig, QForm};
use kstab_core::linalg::Matrix;
use kstab_core::{Error, Result};
use serde::Deserialize;

/// A rational written either as a TOML integer or as a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RatValue {
    Int(i64),
    Text(String),
}

impl RatValue {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RatValue::Int(n) => Ok(int(*n)),
            RatValue::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub geometry: Option<(RatValue, RatValue, RatValue, u32)>,
    pub direction: Option<(RatValue, RatValue)>,
    pub log_discrepancy: Option<RatValue>,
    pub cone: Option<Vec<(RatValue, RatValue)>>,
    pub sample_step: Option<RatValue>,
    pub pencil: Option<PencilSection>,
    pub table: Option<PathBuf>,
    pub query: Option<Query>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilSection {
    pub preset: Option<String>,
    pub fq: Option<Vec<Vec<RatValue>>>,
    pub fh: Option<Vec<RatValue>>,
    pub fqp: Option<Vec<Vec<RatValue>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub b2: Option<u32>,
    pub b3: Option<u32>,
    pub degree: Option<RatValue>,
}

pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start].lines().count().max(1) as u64);
        Error::Parse {
            line,
            message: e.message().to_string(),
        }
    })
}

fn matrix(rows: &[Vec<RatValue>]) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(RatValue::to_rational)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Input(
            "pencil matrix rows have different lengths".into(),
        ));
    }
    Ok(Matrix::from_rows(rows))
}

impl PencilSection {
    pub fn build(&self) -> Result<PencilConfig> {
        match (&self.preset, &self.fq, &self.fh, &self.fqp) {
            (Some(name), None, None, None) => PencilConfig::from_preset(name),
            (None, Some(fq), Some(fh), Some(fqp)) => PencilConfig::new(
                QForm::new(matrix(fq)?)?,
                fh.iter()
                    .map(RatValue::to_rational)
                    .collect::<Result<_>>()?,
                QForm::new(matrix(fqp)?)?,
            ),
            _ => Err(Error::Input(
                "pencil needs either a preset or all of fq, fh, fqp".into(),
            )),
        }
    }
}
