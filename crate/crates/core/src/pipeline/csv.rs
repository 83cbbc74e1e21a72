//! CSV panel ingestion and re-serialization.
//!
//! Grammar: a header row whose first field is `period`; one row per quarter
//! with the period written `YYYYQn`, strictly consecutive; every other cell
//! a decimal number with `.` as separator. LF or CRLF line endings.
//! Data column names are upper-cased on ingest.

use std::path::Path;

use crate::series::{Dataset, Period};
use crate::{Error, Result};

pub const PERIOD_HEADER: &str = "period";

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_csv(&text)
}

/// Strict decimal: optional sign, digits with at most one `.`, optional exponent.
fn parse_decimal(text: &str) -> Option<f64> {
    let b = text.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return None;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return None;
        }
    }
    if i != b.len() {
        return None;
    }
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_csv(text: &str) -> Result<Dataset> {
    if text.trim().is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedCsv(e.to_string()))?
        .clone();
    let mut fields = headers.iter();
    match fields.next() {
        Some(h) if h == PERIOD_HEADER => {}
        Some(h) => {
            return Err(Error::MalformedCsv(format!(
                "first header must be `{PERIOD_HEADER}`, found `{h}`"
            )))
        }
        None => return Err(Error::EmptyFile),
    }
    let mut names: Vec<String> = Vec::new();
    for h in fields {
        if h.is_empty() {
            return Err(Error::MalformedCsv("empty column name in header".into()));
        }
        let name = h.to_uppercase();
        if names.contains(&name) || name == PERIOD_HEADER.to_uppercase() {
            return Err(Error::DuplicateColumn(name));
        }
        names.push(name);
    }

    let mut periods: Vec<Period> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedCsv(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let period_text = &record[0];
        let period: Period = period_text.parse().map_err(|_| Error::BadPeriodFormat {
            text: period_text.to_string(),
            line,
        })?;
        if let Some(prev) = periods.last() {
            if period != prev.succ() {
                return Err(Error::NonConsecutivePeriods {
                    line,
                    expected: prev.succ().to_string(),
                    found: period.to_string(),
                });
            }
        }
        periods.push(period);
        for (j, cell) in record.iter().skip(1).enumerate() {
            let v = parse_decimal(cell).ok_or_else(|| Error::NonNumericCell {
                line,
                column: names[j].clone(),
                text: cell.to_string(),
            })?;
            columns[j].push(v);
        }
    }
    if periods.is_empty() {
        return Err(Error::EmptyFile);
    }
    Dataset::new(periods, names.into_iter().zip(columns).collect())
}

/// Write a data set back in the ingest grammar (LF endings, shortest
/// round-trip decimal rendering).
pub fn to_csv_string(data: &Dataset) -> String {
    let mut out = String::from(PERIOD_HEADER);
    for name in data.column_names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, p) in data.periods().iter().enumerate() {
        out.push_str(&p.to_string());
        for (_, values) in data.columns() {
            out.push(',');
            out.push_str(&values[i].to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let ds = parse_csv("period,TX_DEF\n2005Q1,0.05\n2005Q2,0.06").unwrap();
        assert_eq!(ds.periods().len(), 2);
        assert_eq!(ds.columns().len(), 1);
        assert_eq!(ds.column("TX_DEF").unwrap(), &[0.05, 0.06]);
    }

    #[test]
    fn crlf_and_case_normalization() {
        let ds = parse_csv("period,tx_def\r\n2005Q4,1\r\n2006Q1,2\r\n").unwrap();
        assert_eq!(ds.column("TX_DEF").unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn gap_is_rejected() {
        let err = parse_csv("period,A\n2005Q1,1\n2005Q3,2\n").unwrap_err();
        assert!(matches!(err, Error::NonConsecutivePeriods { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn bad_cells() {
        assert!(matches!(
            parse_csv("period,A\n2005Q1,1,5\n"),
            Err(Error::MalformedCsv(_))
        ));
        for cell in ["abc", "1,000", "", "nan", "inf", "1e", ".", "0x10", " 1"] {
            let text = format!("period,A\n2005Q1,\"{cell}\"\n");
            assert!(
                matches!(parse_csv(&text), Err(Error::NonNumericCell { .. })),
                "{cell}"
            );
        }
        let err = parse_csv("period,A\n2005Q1,1\n2005Q2,x\n").unwrap_err();
        assert_eq!(
            err,
            Error::NonNumericCell {
                line: 3,
                column: "A".into(),
                text: "x".into()
            }
        );
    }

    #[test]
    fn header_rules() {
        assert_eq!(parse_csv("").unwrap_err(), Error::EmptyFile);
        assert_eq!(parse_csv("period,A\n").unwrap_err(), Error::EmptyFile);
        assert!(matches!(parse_csv("date,A\n2005Q1,1\n"), Err(Error::MalformedCsv(_))));
        assert_eq!(
            parse_csv("period,A,a\n2005Q1,1,2\n").unwrap_err(),
            Error::DuplicateColumn("A".into())
        );
        assert!(matches!(
            parse_csv("period,A\n2005-1,1\n"),
            Err(Error::BadPeriodFormat { line: 2, .. })
        ));
    }

    #[test]
    fn decimal_grammar() {
        assert_eq!(parse_decimal("-1.5e-3"), Some(-0.0015));
        assert_eq!(parse_decimal("+2"), Some(2.0));
        assert_eq!(parse_decimal(".5"), Some(0.5));
        assert_eq!(parse_decimal("5."), Some(5.0));
        assert_eq!(parse_decimal("1e999"), None);
    }

    #[test]
    fn reserialize() {
        let text = "period,A,B\n2005Q4,0.05,-12.25\n2006Q1,1,3.5\n";
        assert_eq!(to_csv_string(&parse_csv(text).unwrap()), text);
    }
}
