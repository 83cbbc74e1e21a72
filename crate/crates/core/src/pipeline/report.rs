//! Text and structured (JSON) rendering of a [`PipelineReport`].
//!
//! The structured form has sorted keys and every floating-point value
//! rounded to 9 significant digits, so identical runs give identical bytes
//! and parsing then re-rendering is the identity.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use super::{PipelineReport, SignCheck};
use crate::diagnostics::DwVerdict;
use crate::ols::INTERCEPT;
use crate::stepwise::Direction;
use crate::unitroot::Decision;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "structured" => Ok(ReportFormat::Structured),
            _ => Err(Error::InvalidArgument(format!(
                "format must be `text` or `structured`, got `{s}`"
            ))),
        }
    }
}

pub fn render_report(report: &PipelineReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Structured => render_structured(report),
    }
}

pub fn parse_structured_report(text: &str) -> Result<PipelineReport> {
    serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))
}

fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig9).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn render_structured(report: &PipelineReport) -> String {
    let mut value = serde_json::to_value(report).expect("report is serializable");
    round_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value).expect("value is serializable");
    out.push('\n');
    out
}

fn decision_label(d: Option<Decision>) -> &'static str {
    match d {
        Some(Decision::Stationary) => "stationary",
        Some(Decision::UnitRoot) => "unit root",
        None => "-",
    }
}

fn render_text(r: &PipelineReport) -> String {
    let mut s = String::new();
    let alpha = r.ladder.alpha;

    let _ = writeln!(s, "UNIT-ROOT TESTS (alpha = {alpha})");
    let _ = writeln!(
        s,
        "{:<14} {:>5}  {:<15} {:>4} {:>5} {:>12} {:>12}  decision",
        "series", "diff", "model", "lags", "nobs", "adf stat", "cv 5%"
    );
    for rep in r.integration.values() {
        for stage in &rep.trace {
            for a in &stage.attempts {
                let _ = writeln!(
                    s,
                    "{:<14} {:>5}  {:<15} {:>4} {:>5} {:>12.6} {:>12}  {}",
                    rep.series,
                    stage.differences,
                    a.model.to_string(),
                    a.lags,
                    a.effective_n,
                    a.adf_stat,
                    a.critical_values.map_or("-".to_string(), |cv| format!("{:.6}", cv.five_percent)),
                    decision_label(a.decision),
                );
            }
        }
        let _ = writeln!(s, "  -> {} is I({})", rep.series, rep.order);
    }
    if r.mixed_orders() {
        let _ = writeln!(
            s,
            "note: orders of integration differ; I(d>0) variables enter differenced"
        );
    }

    let dir = match r.ladder.direction {
        Direction::Backward => "backward",
        Direction::Forward => "forward",
    };
    let _ = writeln!(s, "\nSPECIFICATION LADDER ({dir}, alpha = {alpha})");
    for (i, step) in r.ladder.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "step {}: R2 = {:.6}  DW = {}",
            i + 1,
            step.fit.r_squared,
            step.fit
                .durbin_watson
                .map_or("-".to_string(), |d| format!("{d:.6}"))
        );
        for c in &step.fit.coefficients {
            let _ = writeln!(
                s,
                "  {:<18} {:>14.6} ({:>10.6})  p = {:.4}",
                c.name, c.estimate, c.t_stat, c.p_value
            );
        }
        if let (Some(name), Some(p)) = (&step.removed, step.criterion_p_value) {
            let _ = writeln!(s, "  removed {name} (p = {p:.4})");
        }
        if let (Some(name), Some(p)) = (&step.entered, step.criterion_p_value) {
            let _ = writeln!(s, "  entered {name} (p = {p:.4})");
        }
    }

    let _ = writeln!(s, "\nFINAL EQUATION");
    let mut eq = format!("{} =", r.final_equation.dependent);
    for (i, t) in r.final_equation.terms.iter().enumerate() {
        let sign = if t.coefficient < 0.0 { '-' } else { '+' };
        let mag = t.coefficient.abs();
        let term = if t.name == INTERCEPT {
            format!("{mag:.6}")
        } else {
            format!("{mag:.6} {}", t.name)
        };
        if i == 0 {
            let lead = if sign == '-' { "-" } else { "" };
            let _ = write!(eq, " {lead}{term}");
        } else {
            let _ = write!(eq, " {sign} {term}");
        }
    }
    let _ = writeln!(s, "{eq}");
    let _ = writeln!(s, "R-squared = {:.6}", r.r_squared);

    let d = &r.diagnostics;
    let _ = writeln!(s, "\nDIAGNOSTICS");
    let dw_verdict = match d.durbin_watson.verdict {
        DwVerdict::PositiveAutocorr => "positive autocorrelation",
        DwVerdict::NoAutocorr => "no autocorrelation",
        DwVerdict::NegativeAutocorr => "negative autocorrelation",
    };
    let _ = writeln!(
        s,
        "Durbin-Watson  {:.6}  band [{}, {}]  {dw_verdict}",
        d.durbin_watson.statistic, d.durbin_watson.band.low, d.durbin_watson.band.high
    );
    match &d.white {
        Some(w) => {
            let _ = writeln!(
                s,
                "White          Obs*R2 = {:.6}  Chi2({}) p = {:.4}  F = {:.6} p = {:.4}  {:?}",
                w.obs_r_squared, w.df, w.p_value, w.f_statistic, w.f_p_value, w.verdict
            );
            let _ = writeln!(s, "  auxiliary: {}", w.aux_regressors.join(", "));
            if !w.dropped_collinear.is_empty() {
                let _ = writeln!(s, "  dropped (collinear): {}", w.dropped_collinear.join(", "));
            }
        }
        None => {
            let _ = writeln!(s, "White          not applicable (intercept-only model)");
        }
    }
    let jb = &d.jarque_bera;
    let _ = writeln!(
        s,
        "Jarque-Bera    {:.6}  S = {:.6}  K = {:.6}  p = {:.4}  {:?}",
        jb.jb_stat, jb.skewness, jb.kurtosis, jb.p_value, jb.verdict
    );

    let _ = writeln!(s, "\nEXPECTED SIGNS");
    for (var, check) in &r.sign_check {
        let label = match check {
            SignCheck::Conform => "conform",
            SignCheck::NonConform => "non-conform",
            SignCheck::NotApplicable => "not applicable",
        };
        let _ = writeln!(s, "{var:<14} {label}");
    }
    s
}
