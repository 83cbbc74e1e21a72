//! Dickey-Fuller / augmented Dickey-Fuller unit-root testing.
//!
//! The test regression is
//!
//! ```text
//! ΔX_t = ρ·X_{t−1} [+ c] [+ b·t] + Σ_{j=1..p} γ_j·ΔX_{t−j} + ε_t
//! ```
//!
//! and the statistic is the t-ratio of ρ̂, compared against MacKinnon
//! response-surface critical values. [`sequential_adf`] runs the usual
//! top-down strategy (trend model, then constant, then none) and differences
//! the series until the unit root is rejected.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ols::{self, DesignMatrix, OlsFit, INTERCEPT};
use crate::series::Series;
use crate::{Error, Result};

pub const TREND: &str = "TREND";

/// Deterministic part of the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdfModel {
    /// No constant, no trend.
    None,
    ConstantOnly,
    ConstantAndTrend,
}

impl AdfModel {
    fn has_constant(self) -> bool {
        !matches!(self, AdfModel::None)
    }

    fn has_trend(self) -> bool {
        matches!(self, AdfModel::ConstantAndTrend)
    }

    fn deterministic_terms(self) -> usize {
        self.has_constant() as usize + self.has_trend() as usize
    }
}

impl fmt::Display for AdfModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdfModel::None => "none",
            AdfModel::ConstantOnly => "constant",
            AdfModel::ConstantAndTrend => "constant+trend",
        })
    }
}

/// Significance levels with tabulated critical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    OnePercent,
    FivePercent,
    TenPercent,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::OnePercent, Level::FivePercent, Level::TenPercent];

    pub fn from_alpha(alpha: f64) -> Result<Level> {
        Level::ALL
            .into_iter()
            .find(|l| (l.alpha() - alpha).abs() < 1e-12)
            .ok_or(Error::UnsupportedLevel(alpha))
    }

    pub fn alpha(self) -> f64 {
        match self {
            Level::OnePercent => 0.01,
            Level::FivePercent => 0.05,
            Level::TenPercent => 0.10,
        }
    }
}

// MacKinnon (1991) response surfaces, one series (N = 1):
// CV(T) = β∞ + β₁/T + β₂/T², rows ordered 1%, 5%, 10%.
const SURFACE_NONE: [[f64; 3]; 3] = [
    [-2.5658, -1.960, -10.04],
    [-1.9393, -0.398, 0.0],
    [-1.6156, -0.181, 0.0],
];
const SURFACE_CONSTANT: [[f64; 3]; 3] = [
    [-3.4336, -5.999, -29.25],
    [-2.8621, -2.738, -8.36],
    [-2.5671, -1.438, -4.48],
];
const SURFACE_TREND: [[f64; 3]; 3] = [
    [-3.9638, -8.353, -47.44],
    [-3.4126, -4.039, -17.83],
    [-3.1279, -2.418, -7.58],
];

/// Smallest sample size the response surface is used for.
pub const MIN_CRITICAL_N: usize = 10;

fn surface(model: AdfModel, level: Level) -> [f64; 3] {
    let table = match model {
        AdfModel::None => &SURFACE_NONE,
        AdfModel::ConstantOnly => &SURFACE_CONSTANT,
        AdfModel::ConstantAndTrend => &SURFACE_TREND,
    };
    table[level as usize]
}

/// Asymptotic (T → ∞) critical value.
pub fn adf_asymptotic_critical_value(model: AdfModel, level: Level) -> f64 {
    surface(model, level)[0]
}

/// Finite-sample critical value for `effective_n` observations in the test
/// regression.
pub fn adf_critical_value(model: AdfModel, effective_n: usize, level: Level) -> Result<f64> {
    if effective_n < MIN_CRITICAL_N {
        return Err(Error::SeriesTooShort {
            needed: MIN_CRITICAL_N,
            got: effective_n,
        });
    }
    let [b_inf, b1, b2] = surface(model, level);
    let t = effective_n as f64;
    Ok(b_inf + b1 / t + b2 / (t * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one_percent: f64,
    pub five_percent: f64,
    pub ten_percent: f64,
}

impl CriticalValues {
    pub fn for_sample(model: AdfModel, effective_n: usize) -> Result<Self> {
        Ok(Self {
            one_percent: adf_critical_value(model, effective_n, Level::OnePercent)?,
            five_percent: adf_critical_value(model, effective_n, Level::FivePercent)?,
            ten_percent: adf_critical_value(model, effective_n, Level::TenPercent)?,
        })
    }

    pub fn at(&self, level: Level) -> f64 {
        match level {
            Level::OnePercent => self.one_percent,
            Level::FivePercent => self.five_percent,
            Level::TenPercent => self.ten_percent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Stationary,
    UnitRoot,
}

/// Stationary iff the statistic is strictly below the critical value.
pub fn classify(adf_stat: f64, critical_value: f64) -> Decision {
    if adf_stat < critical_value {
        Decision::Stationary
    } else {
        Decision::UnitRoot
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterministicTerm {
    pub coefficient: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

/// One ADF regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfOutcome {
    pub model: AdfModel,
    pub lags: usize,
    /// Coefficient on X_{t−1}.
    pub rho_hat: f64,
    pub rho_std_error: f64,
    /// t-ratio of `rho_hat`.
    pub adf_stat: f64,
    /// Absent below [`MIN_CRITICAL_N`] observations.
    pub critical_values: Option<CriticalValues>,
    pub constant: Option<DeterministicTerm>,
    pub trend: Option<DeterministicTerm>,
    /// Filled in once the outcome is classified.
    pub decision: Option<Decision>,
    pub effective_n: usize,
}

impl AdfOutcome {
    pub fn critical_value(&self, level: Level) -> Result<f64> {
        self.critical_values
            .map(|cv| cv.at(level))
            .ok_or(Error::SeriesTooShort {
                needed: MIN_CRITICAL_N,
                got: self.effective_n,
            })
    }
}

/// Lag order for the augmentation terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagChoice {
    Fixed(usize),
    /// Minimize AIC over 0..=⌊(n−1)^(1/3)⌋ on a common sample.
    Auto,
}

/// Plain Dickey-Fuller: no lagged differences.
impl Default for LagChoice {
    fn default() -> Self {
        LagChoice::Fixed(0)
    }
}

impl fmt::Display for LagChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LagChoice::Fixed(k) => write!(f, "{k}"),
            LagChoice::Auto => f.write_str("auto"),
        }
    }
}

impl std::str::FromStr for LagChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(LagChoice::Auto);
        }
        s.parse()
            .map(LagChoice::Fixed)
            .map_err(|_| Error::InvalidArgument(format!("lags must be an integer or `auto`, got `{s}`")))
    }
}

impl Serialize for LagChoice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LagChoice::Fixed(k) => serializer.serialize_u64(*k as u64),
            LagChoice::Auto => serializer.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for LagChoice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(k) => Ok(LagChoice::Fixed(k as usize)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Maximum lag considered by [`LagChoice::Auto`] for a series of length `n`.
pub fn max_auto_lag(n: usize) -> usize {
    let mut k = ((n.saturating_sub(1)) as f64).cbrt().floor() as usize;
    // guard against cbrt rounding just below an integer
    while (k + 1).pow(3) <= n.saturating_sub(1) {
        k += 1;
    }
    k
}

/// Build and fit the test regression, using ΔX observations from index
/// `skip` onward (`skip ≥ lags`).
fn adf_fit(s: &Series, model: AdfModel, lags: usize, skip: usize) -> Result<(OlsFit, usize)> {
    let x = s.values();
    let n = x.len();
    let k = 1 + model.deterministic_terms() + lags;
    if n < 2 || n - 1 <= skip || n - 1 - skip < k + 2 {
        return Err(Error::SeriesTooShort {
            needed: skip + k + 3,
            got: n,
        });
    }
    let dx: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let rows: Vec<usize> = (skip..dx.len()).collect();
    let m = rows.len();

    let mut design = DesignMatrix::new(m);
    design.push(format!("{}(-1)", s.name()), rows.iter().map(|&i| x[i]).collect())?;
    if model.has_constant() {
        design.push(INTERCEPT, vec![1.0; m])?;
    }
    if model.has_trend() {
        design.push(TREND, (0..m).map(|t| t as f64).collect())?;
    }
    for j in 1..=lags {
        design.push(
            format!("D({}(-{j}))", s.name()),
            rows.iter().map(|&i| dx[i - j]).collect(),
        )?;
    }
    let y: Vec<f64> = rows.iter().map(|&i| dx[i]).collect();
    let fit = ols::fit(&format!("D({})", s.name()), &y, &design)?;
    if fit.is_exact() {
        return Err(Error::DegenerateFit);
    }
    Ok((fit, m))
}

fn outcome(fit: &OlsFit, model: AdfModel, lags: usize, effective_n: usize) -> Result<AdfOutcome> {
    let rho = &fit.coefficients[0];
    let term = |name: &str| {
        fit.coefficient(name).map(|c| DeterministicTerm {
            coefficient: c.estimate,
            t_stat: c.t_stat,
            p_value: c.p_value,
        })
    };
    Ok(AdfOutcome {
        model,
        lags,
        rho_hat: rho.estimate,
        rho_std_error: rho.std_error,
        adf_stat: rho.t_stat,
        critical_values: CriticalValues::for_sample(model, effective_n).ok(),
        constant: term(INTERCEPT),
        trend: term(TREND),
        decision: None,
        effective_n,
    })
}

/// Run one ADF regression with a fixed number of lagged differences.
/// The returned outcome is not yet classified.
pub fn adf_regression(s: &Series, model: AdfModel, lags: usize) -> Result<AdfOutcome> {
    let (fit, m) = adf_fit(s, model, lags, lags)?;
    outcome(&fit, model, lags, m)
}

/// Pick the lag order by AIC on a common sample, then refit on the full
/// sample available for that order.
pub fn adf_regression_auto(s: &Series, model: AdfModel) -> Result<AdfOutcome> {
    let max_lag = max_auto_lag(s.len());
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=max_lag {
        let (fit, m) = match adf_fit(s, model, p, max_lag) {
            Ok(v) => v,
            Err(Error::SeriesTooShort { .. }) if p > 0 => break,
            Err(e) => return Err(e),
        };
        let k = fit.coefficients.len() as f64;
        let aic = m as f64 * (fit.ssr / m as f64).ln() + 2.0 * k;
        if best.is_none_or(|(b, _)| aic < b) {
            best = Some((aic, p));
        }
    }
    let lags = best.map_or(0, |(_, p)| p);
    adf_regression(s, model, lags)
}

/// Source of ADF regression outcomes for [`sequential_adf_with`].
///
/// The default [`OlsAdf`] estimates by OLS; other implementations can
/// replay recorded outcomes to exercise the decision logic alone.
pub trait AdfProvider {
    fn regress(&self, series: &Series, model: AdfModel, lags: LagChoice) -> Result<AdfOutcome>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OlsAdf;

impl AdfProvider for OlsAdf {
    fn regress(&self, series: &Series, model: AdfModel, lags: LagChoice) -> Result<AdfOutcome> {
        match lags {
            LagChoice::Fixed(p) => adf_regression(series, model, p),
            LagChoice::Auto => adf_regression_auto(series, model),
        }
    }
}

/// The regressions run on one differencing order, in the order tried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfStage {
    pub differences: usize,
    pub attempts: Vec<AdfOutcome>,
}

impl AdfStage {
    /// The outcome the decision was taken on.
    pub fn settled(&self) -> &AdfOutcome {
        self.attempts.last().expect("a stage holds at least one attempt")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationReport {
    pub series: String,
    pub order: usize,
    /// One stage per differencing order tried, levels first.
    pub trace: Vec<AdfStage>,
    pub stationarized: Series,
}

/// Determine the order of integration with the default OLS provider.
pub fn sequential_adf(
    s: &Series,
    alpha: f64,
    lags: LagChoice,
    max_diff: usize,
) -> Result<IntegrationReport> {
    sequential_adf_with(&OlsAdf, s, alpha, lags, max_diff)
}

/// Determine the order of integration.
///
/// At each differencing order: fit the trend model; drop the trend if its
/// p-value exceeds `alpha`, then drop the constant likewise; classify the
/// settled model at `alpha`. On a unit root, difference once more and
/// repeat, up to `max_diff` differences.
pub fn sequential_adf_with<P: AdfProvider + ?Sized>(
    provider: &P,
    s: &Series,
    alpha: f64,
    lags: LagChoice,
    max_diff: usize,
) -> Result<IntegrationReport> {
    if max_diff == 0 {
        return Err(Error::InvalidArgument("max_diff must be at least 1".into()));
    }
    let level = Level::from_alpha(alpha)?;
    let mut trace = Vec::new();
    for d in 0..=max_diff {
        let current = s.difference(d)?;
        let mut attempts = vec![provider.regress(&current, AdfModel::ConstantAndTrend, lags)?];
        if p_value_of(&attempts[0].trend) > alpha {
            attempts.push(provider.regress(&current, AdfModel::ConstantOnly, lags)?);
            if p_value_of(&attempts[1].constant) > alpha {
                attempts.push(provider.regress(&current, AdfModel::None, lags)?);
            }
        }
        let settled = attempts.last_mut().expect("non-empty");
        let decision = classify(settled.adf_stat, settled.critical_value(level)?);
        settled.decision = Some(decision);
        trace.push(AdfStage {
            differences: d,
            attempts,
        });
        if decision == Decision::Stationary {
            return Ok(IntegrationReport {
                series: s.name().to_string(),
                order: d,
                trace,
                stationarized: current,
            });
        }
    }
    Err(Error::OrderExceeded {
        series: s.name().to_string(),
        max_diff,
    })
}

// A missing term counts as insignificant.
fn p_value_of(term: &Option<DeterministicTerm>) -> f64 {
    term.map_or(1.0, |t| t.p_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Period;

    fn series(values: Vec<f64>) -> Series {
        Series::new("X", Period::new(2005, 1).unwrap(), values).unwrap()
    }

    #[test]
    fn classify_is_strict() {
        assert_eq!(classify(-2.815412, -2.976263), Decision::UnitRoot);
        assert_eq!(classify(-8.183802, -2.976263), Decision::Stationary);
        assert_eq!(classify(-2.0, -2.0), Decision::UnitRoot);
    }

    #[test]
    fn critical_values_ordered() {
        for model in [AdfModel::None, AdfModel::ConstantOnly, AdfModel::ConstantAndTrend] {
            for n in [10, 27, 100, 10_000] {
                let cv = CriticalValues::for_sample(model, n).unwrap();
                assert!(cv.one_percent < cv.five_percent && cv.five_percent < cv.ten_percent);
            }
        }
        assert!(adf_critical_value(AdfModel::None, 9, Level::FivePercent).is_err());
    }

    #[test]
    fn level_from_alpha() {
        assert_eq!(Level::from_alpha(0.05).unwrap(), Level::FivePercent);
        assert_eq!(Level::from_alpha(0.2).unwrap_err(), Error::UnsupportedLevel(0.2));
    }

    #[test]
    fn ramp_is_degenerate() {
        let s = series((0..20).map(f64::from).collect());
        assert_eq!(
            adf_regression(&s, AdfModel::ConstantOnly, 0).unwrap_err(),
            Error::DegenerateFit
        );
    }

    #[test]
    fn constant_series_is_rank_deficient() {
        let s = series(vec![3.0; 20]);
        assert!(matches!(
            adf_regression(&s, AdfModel::ConstantOnly, 0),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn too_short() {
        let s = series(vec![1.0, 2.0, 1.5, 3.0]);
        assert!(matches!(
            adf_regression(&s, AdfModel::ConstantAndTrend, 0),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn lags_reduce_effective_n() {
        let s = series((0..30).map(|i| ((i * 7919) % 13) as f64).collect());
        let out = adf_regression(&s, AdfModel::ConstantOnly, 2).unwrap();
        assert_eq!(out.effective_n, 27);
        assert_eq!(out.lags, 2);
        assert!(out.constant.is_some() && out.trend.is_none());
    }

    #[test]
    fn auto_lag_cap() {
        assert_eq!(max_auto_lag(28), 3);
        assert_eq!(max_auto_lag(9), 2);
        assert_eq!(max_auto_lag(200), 5);
    }

    #[test]
    fn lag_choice_parse() {
        assert_eq!("auto".parse::<LagChoice>().unwrap(), LagChoice::Auto);
        assert_eq!("3".parse::<LagChoice>().unwrap(), LagChoice::Fixed(3));
        assert!("x".parse::<LagChoice>().is_err());
    }
}
