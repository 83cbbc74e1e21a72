//! Quarterly time series and the transformations applied before modelling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A calendar quarter. Ordering is lexicographic on `(year, quarter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Period {
    year: i32,
    quarter: u8,
}

impl Period {
    pub fn new(year: i32, quarter: u8) -> Result<Self> {
        if !(1..=4).contains(&quarter) {
            return Err(Error::BadPeriodFormat {
                text: format!("{year}Q{quarter}"),
                line: 0,
            });
        }
        Ok(Self { year, quarter })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn quarter(self) -> u8 {
        self.quarter
    }

    /// Quarters elapsed since year 0, Q1.
    fn ordinal(self) -> i64 {
        i64::from(self.year) * 4 + i64::from(self.quarter) - 1
    }

    fn from_ordinal(ord: i64) -> Self {
        Self {
            year: ord.div_euclid(4) as i32,
            quarter: (ord.rem_euclid(4) + 1) as u8,
        }
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Shift by `quarters` (may be negative).
    pub fn offset(self, quarters: i64) -> Self {
        Self::from_ordinal(self.ordinal() + quarters)
    }

    /// Signed number of quarters from `self` to `other`.
    pub fn quarters_until(self, other: Period) -> i64 {
        other.ordinal() - self.ordinal()
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}Q{}", self.year, self.quarter)
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Accepts exactly `YYYYQn`: four ASCII digits, `Q`, one digit in 1..=4.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPeriodFormat {
            text: s.to_string(),
            line: 0,
        };
        let b = s.as_bytes();
        if b.len() != 6 || b[4] != b'Q' || !b[..4].iter().all(u8::is_ascii_digit) {
            return Err(bad());
        }
        let quarter = match b[5] {
            q @ b'1'..=b'4' => q - b'0',
            _ => return Err(bad()),
        };
        let year: i32 = s[..4].parse().map_err(|_| bad())?;
        Ok(Self { year, quarter })
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Transformations applied to a series before modelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// Natural logarithm.
    Log,
    /// First difference.
    Diff,
    /// Lag by `k` quarters.
    Lag(usize),
}

/// A named, gap-free quarterly series of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct Series {
    name: String,
    start: Period,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSeries {
    name: String,
    start: Period,
    values: Vec<f64>,
}

impl TryFrom<RawSeries> for Series {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        Series::new(raw.name, raw.start, raw.values)
    }
}

impl Series {
    pub fn new(name: impl Into<String>, start: Period, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                series: name,
                index,
            });
        }
        Ok(Self {
            name,
            start,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> Period {
        self.start
    }

    /// Period of the last observation.
    pub fn end(&self) -> Period {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period(&self, t: usize) -> Period {
        self.start.offset(t as i64)
    }

    pub fn renamed(&self, name: impl Into<String>) -> Series {
        Series {
            name: name.into(),
            ..self.clone()
        }
    }

    pub fn transform(&self, kind: Transform) -> Result<Series> {
        match kind {
            Transform::Log => {
                if let Some(index) = self.values.iter().position(|&v| v <= 0.0) {
                    return Err(Error::NonPositiveValue {
                        series: self.name.clone(),
                        index,
                    });
                }
                Ok(Series {
                    name: format!("{}_LOG", self.name),
                    start: self.start,
                    values: self.values.iter().map(|v| v.ln()).collect(),
                })
            }
            Transform::Diff => {
                self.require_longer_than(1)?;
                Ok(Series {
                    name: format!("{}_DIFF1", self.name),
                    start: self.start.succ(),
                    values: self.values.windows(2).map(|w| w[1] - w[0]).collect(),
                })
            }
            Transform::Lag(k) => {
                if k == 0 {
                    return Err(Error::InvalidArgument("lag order must be positive".into()));
                }
                self.require_longer_than(k)?;
                Ok(Series {
                    name: format!("{}_LAG{k}", self.name),
                    start: self.start.offset(k as i64),
                    values: self.values[..self.values.len() - k].to_vec(),
                })
            }
        }
    }

    /// Difference `order` times; the result is named `<name>_DIFF<order>`.
    /// Order 0 returns the series unchanged.
    pub fn difference(&self, order: usize) -> Result<Series> {
        if order == 0 {
            return Ok(self.clone());
        }
        self.require_longer_than(order)?;
        let mut values = self.values.clone();
        for _ in 0..order {
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(Series {
            name: format!("{}_DIFF{order}", self.name),
            start: self.start.offset(order as i64),
            values,
        })
    }

    /// Restrict to the inclusive period range `[from, to]`.
    pub fn window(&self, from: Period, to: Period) -> Result<Series> {
        let lo = self.start.quarters_until(from);
        let hi = self.start.quarters_until(to);
        if lo < 0 || hi >= self.values.len() as i64 || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "window {from}..{to} outside `{}` ({}..{})",
                self.name,
                self.start,
                self.end()
            )));
        }
        Ok(Series {
            name: self.name.clone(),
            start: from,
            values: self.values[lo as usize..=hi as usize].to_vec(),
        })
    }

    pub fn describe(&self) -> Result<Summary> {
        describe(&self.values)
    }

    fn require_longer_than(&self, k: usize) -> Result<()> {
        if self.values.len() <= k {
            return Err(Error::SeriesTooShort {
                needed: k + 1,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Trim every series to the period range they all cover.
pub fn align(series: &[Series]) -> Result<Vec<Series>> {
    let Some(first) = series.first() else {
        return Ok(Vec::new());
    };
    let from = series.iter().map(Series::start).max().unwrap_or(first.start);
    let to = series.iter().map(Series::end).min().unwrap_or(first.end());
    if from > to {
        return Err(Error::InvalidArgument(
            "series share no common period".into(),
        ));
    }
    series.iter().map(|s| s.window(from, to)).collect()
}

/// Descriptive statistics of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation (divisor n - 1).
    pub std_dev: f64,
    pub n: usize,
}

pub fn describe(values: &[f64]) -> Result<Summary> {
    let n = values.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(Summary {
        mean,
        median,
        max: sorted[n - 1],
        min: sorted[0],
        std_dev: (ss / (n - 1) as f64).sqrt(),
        n,
    })
}

/// Rectangular quarterly panel: one period axis, named numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    periods: Vec<Period>,
    columns: Vec<(String, Vec<f64>)>,
}

impl Dataset {
    pub fn new(periods: Vec<Period>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        for (i, (name, values)) in columns.iter().enumerate() {
            if columns[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
            if values.len() != periods.len() {
                return Err(Error::InvalidArgument(format!(
                    "column `{name}` has {} values for {} periods",
                    values.len(),
                    periods.len()
                )));
            }
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue {
                    series: name.clone(),
                    index,
                });
            }
        }
        for (i, w) in periods.windows(2).enumerate() {
            if w[1] != w[0].succ() {
                return Err(Error::NonConsecutivePeriods {
                    line: i + 3,
                    expected: w[0].succ().to_string(),
                    found: w[1].to_string(),
                });
            }
        }
        Ok(Self { periods, columns })
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    pub fn series(&self, name: &str) -> Result<Series> {
        let values = self
            .column(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        let start = *self
            .periods
            .first()
            .ok_or(Error::EmptyFile)?;
        Series::new(name, start, values.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(y: i32, q: u8) -> Period {
        Period::new(y, q).unwrap()
    }

    fn s(values: &[f64]) -> Series {
        Series::new("X", q(2005, 1), values.to_vec()).unwrap()
    }

    #[test]
    fn period_successor_wraps_year() {
        assert_eq!(q(2005, 4).succ(), q(2006, 1));
        assert_eq!(q(2006, 1).offset(-1), q(2005, 4));
        assert!(q(2005, 4) < q(2006, 1));
        assert_eq!(q(2005, 1).quarters_until(q(2011, 4)), 27);
    }

    #[test]
    fn period_parse() {
        assert_eq!("2005Q3".parse::<Period>().unwrap(), q(2005, 3));
        for bad in ["2005Q5", "2005Q0", "05Q1", "2005q1", "2005-Q1", "2005Q1 ", ""] {
            assert!(bad.parse::<Period>().is_err(), "{bad}");
        }
        assert!(Period::new(2005, 0).is_err());
    }

    #[test]
    fn diff_shifts_start() {
        let d = s(&[1.0, 3.0, 6.0]).transform(Transform::Diff).unwrap();
        assert_eq!(d.values(), &[2.0, 3.0]);
        assert_eq!(d.start(), q(2005, 2));
        assert_eq!(d.name(), "X_DIFF1");
    }

    #[test]
    fn log_identity() {
        let e = std::f64::consts::E;
        let l = s(&[1.0, e, e * e]).transform(Transform::Log).unwrap();
        for (got, want) in l.values().iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(l.start(), q(2005, 1));
    }

    #[test]
    fn log_rejects_non_positive() {
        let err = s(&[1.0, 0.0]).transform(Transform::Log).unwrap_err();
        assert!(matches!(err, Error::NonPositiveValue { index: 1, .. }));
    }

    #[test]
    fn lag_keeps_leading_values() {
        let l = s(&[1.0, 2.0, 3.0, 4.0]).transform(Transform::Lag(2)).unwrap();
        assert_eq!(l.values(), &[1.0, 2.0]);
        assert_eq!(l.start(), q(2005, 3));
        assert_eq!(l.name(), "X_LAG2");
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            s(&[1.0]).transform(Transform::Diff),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            s(&[1.0, 2.0]).transform(Transform::Lag(2)),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(describe(&[1.0]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Series::new("X", q(2005, 1), vec![1.0, f64::NAN]).is_err());
        assert!(Series::new("X", q(2005, 1), vec![]).is_err());
    }

    #[test]
    fn describe_small_cases() {
        let d = describe(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((d.mean, d.median, d.min, d.max, d.std_dev, d.n), (2.0, 2.0, 1.0, 3.0, 1.0, 3));
        assert_eq!(describe(&[4.0, 1.0, 3.0, 2.0]).unwrap().median, 2.5);
    }

    #[test]
    fn difference_matches_repeated_diff() {
        let x = s(&[1.0, 4.0, 9.0, 16.0, 25.0]);
        let twice = x
            .transform(Transform::Diff)
            .unwrap()
            .transform(Transform::Diff)
            .unwrap();
        let d2 = x.difference(2).unwrap();
        assert_eq!(d2.values(), twice.values());
        assert_eq!(d2.start(), twice.start());
        assert_eq!(d2.name(), "X_DIFF2");
    }

    #[test]
    fn align_trims_to_common_range() {
        let a = s(&[1.0, 2.0, 3.0, 4.0]);
        let b = a.transform(Transform::Diff).unwrap();
        let out = align(&[a, b]).unwrap();
        assert_eq!(out[0].values(), &[2.0, 3.0, 4.0]);
        assert_eq!(out[0].start(), out[1].start());
        assert_eq!(out[1].len(), 3);
    }

    #[test]
    fn dataset_validation() {
        let p = vec![q(2005, 1), q(2005, 2)];
        assert!(Dataset::new(p.clone(), vec![("A".into(), vec![1.0])]).is_err());
        assert!(matches!(
            Dataset::new(
                p.clone(),
                vec![("A".into(), vec![1.0, 2.0]), ("A".into(), vec![1.0, 2.0])]
            ),
            Err(Error::DuplicateColumn(_))
        ));
        assert!(matches!(
            Dataset::new(vec![q(2005, 1), q(2005, 3)], vec![]),
            Err(Error::NonConsecutivePeriods { .. })
        ));
        let ds = Dataset::new(p, vec![("A".into(), vec![1.0, 2.0])]).unwrap();
        assert!(matches!(ds.series("B"), Err(Error::MissingColumn(_))));
        assert_eq!(ds.series("A").unwrap().end(), q(2005, 2));
    }
}
