//! End-to-end workflow: stationarize every series, run backward elimination
//! on the default rate, check the residuals and the coefficient signs.

mod config;
mod csv;
mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use self::config::{default_expected_signs, ExpectedSign, PipelineConfig, Sign};
pub use self::csv::{load_csv, parse_csv, to_csv_string, PERIOD_HEADER};
pub use self::report::{parse_structured_report, render_report, ReportFormat};

use crate::diagnostics::{self, DiagnosticsReport};
use crate::ols::{DesignMatrix, OlsFit};
use crate::series::{self, Dataset, Series};
use crate::stepwise::{self, SpecLadder};
use crate::unitroot::{self, IntegrationReport};
use crate::{Error, Result};

/// Fewest aligned observations the regression stage accepts.
pub const MIN_PIPELINE_OBS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCheck {
    Conform,
    NonConform,
    NotApplicable,
}

fn sign_rule(sign: Sign, coefficient: f64) -> SignCheck {
    let ok = match sign {
        Sign::Negative => coefficient < 0.0,
        Sign::Positive => coefficient > 0.0,
        Sign::Ambiguous => true,
    };
    if ok {
        SignCheck::Conform
    } else {
        SignCheck::NonConform
    }
}

/// Compare fitted coefficients with their expected signs. Variables absent
/// from the fit are `NotApplicable`; a zero coefficient never conforms to a
/// signed expectation.
pub fn check_expected_signs(
    fit: &OlsFit,
    expectations: &[ExpectedSign],
) -> BTreeMap<String, SignCheck> {
    check_signs_by(expectations, |var| fit.coefficient(var).map(|c| c.estimate))
}

fn check_signs_by(
    expectations: &[ExpectedSign],
    coefficient: impl Fn(&str) -> Option<f64>,
) -> BTreeMap<String, SignCheck> {
    expectations
        .iter()
        .map(|e| {
            let check = coefficient(&e.variable)
                .map_or(SignCheck::NotApplicable, |b| sign_rule(e.sign, b));
            (e.variable.clone(), check)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalEquation {
    pub dependent: String,
    pub terms: Vec<Term>,
}

impl FinalEquation {
    fn from_fit(fit: &OlsFit) -> Self {
        Self {
            dependent: fit.dependent.clone(),
            terms: fit
                .coefficients
                .iter()
                .map(|c| Term {
                    name: c.name.clone(),
                    coefficient: c.estimate,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    /// Keyed by original variable name, dependent included.
    pub integration: BTreeMap<String, IntegrationReport>,
    pub ladder: SpecLadder,
    pub diagnostics: DiagnosticsReport,
    pub sign_check: BTreeMap<String, SignCheck>,
    pub final_equation: FinalEquation,
    pub r_squared: f64,
}

impl PipelineReport {
    /// True when the variables were not all integrated of the same order.
    pub fn mixed_orders(&self) -> bool {
        let mut orders = self.integration.values().map(|r| r.order);
        let first = orders.next();
        orders.any(|o| Some(o) != first)
    }
}

pub fn run_pipeline(data: &Dataset, config: &PipelineConfig) -> Result<PipelineReport> {
    config.validate()?;
    let names: Vec<&str> = std::iter::once(config.dependent.as_str())
        .chain(config.regressors.iter().map(String::as_str))
        .collect();
    let raw: Vec<Series> = names
        .iter()
        .map(|n| data.series(n))
        .collect::<Result<_>>()?;

    // independent per-variable unit-root passes
    let reports: Vec<Result<IntegrationReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = raw
            .iter()
            .map(|s| {
                scope.spawn(move || {
                    unitroot::sequential_adf(s, config.alpha, config.adf_lags, config.max_diff)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("unit-root worker panicked"))
            .collect()
    });
    let reports: Vec<IntegrationReport> = reports.into_iter().collect::<Result<_>>()?;

    let stationary: Vec<Series> = reports.iter().map(|r| r.stationarized.clone()).collect();
    let aligned = series::align(&stationary)?;
    let n = aligned[0].len();
    if n < MIN_PIPELINE_OBS || n <= config.regressors.len() + 1 {
        return Err(Error::InsufficientObservations {
            n,
            k: config.regressors.len() + 1,
        });
    }

    let (dep, regs) = aligned.split_first().expect("dependent is present");
    let mut design = DesignMatrix::with_intercept(n);
    for s in regs {
        design.push(s.name(), s.values().to_vec())?;
    }
    let ladder = stepwise::backward_eliminate(dep.name(), dep.values(), &design, config.alpha)?;
    let final_fit = ladder.final_fit();
    let final_names: Vec<&str> = final_fit.names().collect();
    let final_design = design.select(&final_names);
    let diagnostics =
        diagnostics::diagnose(final_fit, &final_design, config.alpha, config.dw_band)?;

    let column_of: BTreeMap<&str, &str> = reports
        .iter()
        .map(|r| (r.series.as_str(), r.stationarized.name()))
        .collect();
    let sign_check = check_signs_by(&config.expected_signs, |var| {
        let col = column_of.get(var)?;
        final_fit.coefficient(col).map(|c| c.estimate)
    });

    Ok(PipelineReport {
        final_equation: FinalEquation::from_fit(final_fit),
        r_squared: final_fit.r_squared,
        integration: reports.into_iter().map(|r| (r.series.clone(), r)).collect(),
        diagnostics,
        sign_check,
        ladder,
    })
}
