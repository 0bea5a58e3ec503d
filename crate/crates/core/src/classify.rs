//! Family invariant tables and the smooth-limit argument.
//!
//! A smooth degeneration preserves `(b₂, b₃, (-K)³)`, so a smooth limit of a
//! family member has to match a row of the table with the same triple.

use std::collections::BTreeSet;
use std::io::Read;

use serde::Serialize;

use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::stability::{StabilityVerdict, Tristate};

pub const TABLE_HEADER: [&str; 4] = ["id", "b2", "b3", "degree"];

/// Seed table shipped with the crate.
pub const SEED_TABLE: &str = include_str!("../data/mori_mukai_seed.csv");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRecord {
    pub id: String,
    pub b2: u32,
    pub b3: u32,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub degree: Rational,
}

/// Parses a CSV table with header exactly `id,b2,b3,degree` (LF or CRLF).
pub fn load_table(source: impl Read) -> Result<Vec<FamilyRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = Vec::new();
    let mut ids = BTreeSet::new();
    let mut seen_header = false;
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let parse_err = |message: String| Error::Parse { line, message };
        if !seen_header {
            if row.iter().ne(TABLE_HEADER) {
                return Err(parse_err(format!(
                    "expected header {}",
                    TABLE_HEADER.join(",")
                )));
            }
            seen_header = true;
            continue;
        }
        if row.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, found {}", row.len())));
        }
        let count = |i: usize| {
            row[i].trim().parse::<u32>().map_err(|_| {
                parse_err(format!(
                    "{} is not a nonnegative integer: {:?}",
                    TABLE_HEADER[i], &row[i]
                ))
            })
        };
        let id = row[0].trim().to_string();
        if id.is_empty() {
            return Err(parse_err("empty id".into()));
        }
        let record = FamilyRecord {
            b2: count(1)?,
            b3: count(2)?,
            degree: parse_rational(row[3].trim()).map_err(|e| parse_err(format!("degree: {e}")))?,
            id,
        };
        if !ids.insert(record.id.clone()) {
            return Err(Error::Input(format!(
                "duplicate family id {:?} on line {line}",
                record.id
            )));
        }
        records.push(record);
    }
    if !seen_header {
        return Err(Error::Parse {
            line: 1,
            message: "missing header".into(),
        });
    }
    Ok(records)
}

/// Normalized CSV form, LF line endings.
pub fn serialize_table(records: &[FamilyRecord]) -> String {
    let mut out = TABLE_HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.id,
            r.b2,
            r.b3,
            format_rational(&r.degree)
        ));
    }
    out
}

pub fn seed_table() -> Vec<FamilyRecord> {
    load_table(SEED_TABLE.as_bytes()).expect("seed table is well formed")
}

/// Ids whose invariant triple matches exactly, in table order.
pub fn match_invariants(
    table: &[FamilyRecord],
    b2: u32,
    b3: u32,
    degree: &Rational,
) -> Vec<String> {
    table
        .iter()
        .filter(|r| r.b2 == b2 && r.b3 == b3 && &r.degree == degree)
        .map(|r| r.id.clone())
        .collect()
}

pub const LIMIT_SINGULAR: &str = "limit must be singular";
pub const INCONCLUSIVE: &str = "inconclusive";
pub const INCONCLUSIVE_NO_MATCH: &str = "inconclusive (no family matched)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub conclusion: String,
    pub text: String,
}

/// Chains "smooth limit ⟹ same family ⟹ soliton ⟹ contradiction" when the
/// verdict rules out solitons on the matched families.
pub fn smooth_limit_report(matches: &[String], verdict: &StabilityVerdict) -> LimitReport {
    if matches.is_empty() {
        return LimitReport {
            conclusion: INCONCLUSIVE_NO_MATCH.into(),
            text: "no family in the supplied table carries the queried invariants".into(),
        };
    }
    let families = matches.join(", ");
    if verdict.admits_krs != Tristate::No {
        return LimitReport {
            conclusion: INCONCLUSIVE.into(),
            text: format!(
                "a smooth limit would lie in family {families}, but nonexistence of a Kähler-Ricci soliton there is not established"
            ),
        };
    }
    LimitReport {
        conclusion: LIMIT_SINGULAR.into(),
        text: format!(
            "A smooth limit would have the same (b2, b3, (-K)^3) and hence lie in family {families}. \
             The limit of the normalized Kähler-Ricci flow on a smooth Fano manifold is a Kähler-Ricci soliton, \
             but {families} admits none (admitsKRS = no). So the limit is singular and the flow is of type II; \
             {LIMIT_SINGULAR}."
        ),
    }
}
