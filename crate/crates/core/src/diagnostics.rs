//! Residual diagnostics: Durbin-Watson, White heteroscedasticity test and
//! Jarque-Bera normality test.

use serde::{Deserialize, Serialize};

use crate::dist;
use crate::ols::{self, DesignMatrix, Factorization, OlsFit, INTERCEPT};
use crate::{Error, Result};

/// Acceptance band for the Durbin-Watson statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DwBand {
    pub low: f64,
    pub high: f64,
}

impl Default for DwBand {
    fn default() -> Self {
        Self {
            low: 1.0,
            high: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DwVerdict {
    PositiveAutocorr,
    NoAutocorr,
    NegativeAutocorr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwResult {
    pub statistic: f64,
    pub verdict: DwVerdict,
    pub band: DwBand,
}

/// Σ_{t≥2}(e_t − e_{t−1})² / Σ e_t², or `None` when every residual is zero.
pub fn dw_statistic(residuals: &[f64]) -> Option<f64> {
    let den: f64 = residuals.iter().map(|e| e * e).sum();
    if den == 0.0 {
        return None;
    }
    let num: f64 = residuals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    Some(num / den)
}

pub fn durbin_watson(residuals: &[f64], band: DwBand) -> Result<DwResult> {
    if residuals.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: residuals.len(),
        });
    }
    let statistic = dw_statistic(residuals).ok_or(Error::DegenerateResiduals)?;
    let verdict = if statistic < band.low {
        DwVerdict::PositiveAutocorr
    } else if statistic > band.high {
        DwVerdict::NegativeAutocorr
    } else {
        DwVerdict::NoAutocorr
    };
    Ok(DwResult {
        statistic,
        verdict,
        band,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhiteVerdict {
    Homoscedastic,
    Heteroscedastic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteResult {
    /// n × R² of the auxiliary regression.
    pub obs_r_squared: f64,
    pub df: usize,
    pub p_value: f64,
    pub f_statistic: f64,
    pub f_p_value: f64,
    /// Auxiliary columns actually used, constant first.
    pub aux_regressors: Vec<String>,
    pub dropped_collinear: Vec<String>,
    pub verdict: WhiteVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhiteOptions {
    pub alpha: f64,
    pub cross_terms: bool,
}

impl Default for WhiteOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            cross_terms: true,
        }
    }
}

/// Candidate auxiliary columns for the White regression, before collinear
/// dropping: the constant, then for each regressor `X` in design order:
/// `X`, `X^2` and `X*Y` for every later regressor `Y`.
pub fn white_auxiliary_design(design: &DesignMatrix, cross_terms: bool) -> Result<DesignMatrix> {
    if !design.has_intercept() {
        return Err(Error::InvalidArgument(
            "White test needs a design with an intercept".into(),
        ));
    }
    let regs: Vec<(&str, &[f64])> = design
        .regressor_names()
        .map(|n| (n, design.column(n).unwrap_or_default()))
        .collect();
    if regs.is_empty() {
        return Err(Error::InvalidArgument(
            "White test needs at least one regressor besides the intercept".into(),
        ));
    }
    let n = design.nrows();
    let mut aux = DesignMatrix::with_intercept(n);
    for (i, &(name, x)) in regs.iter().enumerate() {
        aux.push(name, x.to_vec())?;
        aux.push(format!("{name}^2"), x.iter().map(|v| v * v).collect())?;
        if cross_terms {
            for &(other, z) in &regs[i + 1..] {
                aux.push(
                    format!("{name}*{other}"),
                    x.iter().zip(z).map(|(a, b)| a * b).collect(),
                )?;
            }
        }
    }
    Ok(aux)
}

/// White test on the residuals of `fit`, whose regressors are `design`.
pub fn white_test(fit: &OlsFit, design: &DesignMatrix, alpha: f64) -> Result<WhiteResult> {
    white_test_residuals(
        &fit.residuals,
        design,
        WhiteOptions {
            alpha,
            ..WhiteOptions::default()
        },
    )
}

pub fn white_test_residuals(
    residuals: &[f64],
    design: &DesignMatrix,
    opts: WhiteOptions,
) -> Result<WhiteResult> {
    let n = design.nrows();
    if residuals.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} residuals for a design with {n} rows",
            residuals.len()
        )));
    }
    if residuals.iter().all(|&e| e == 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    let candidates = white_auxiliary_design(design, opts.cross_terms)?;
    let qr = Factorization::new(candidates.columns(), n);
    let kept: Vec<&str> = qr
        .kept
        .iter()
        .map(|&j| candidates.names()[j].as_str())
        .collect();
    let dropped_collinear: Vec<String> = qr
        .dropped
        .iter()
        .map(|&j| candidates.names()[j].clone())
        .collect();
    if kept.len() < 2 {
        return Err(Error::RankDeficient {
            column: dropped_collinear.first().cloned().unwrap_or_default(),
        });
    }
    if n <= kept.len() {
        return Err(Error::InsufficientObservations { n, k: kept.len() });
    }
    let aux = candidates.select(&kept);
    let df = kept.len() - 1;
    let aux_regressors: Vec<String> = aux.names().to_vec();

    let e2: Vec<f64> = residuals.iter().map(|e| e * e).collect();
    let (lo, hi) = e2
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    // constant regressand: nothing to explain
    let r2 = if hi - lo <= 1e-12 * hi {
        0.0
    } else {
        let fit = ols::fit("RESID^2", &e2, &aux)?;
        if fit.is_exact() {
            return Err(Error::DegenerateFit);
        }
        fit.r_squared.max(0.0)
    };
    let obs_r_squared = n as f64 * r2;
    let p_value = dist::chi2_sf(obs_r_squared, df as f64);
    let resid_df = (n - df - 1) as f64;
    let f_statistic = (r2 / df as f64) / ((1.0 - r2) / resid_df);
    let f_p_value = dist::f_sf(f_statistic, df as f64, resid_df);
    let verdict = if p_value > opts.alpha {
        WhiteVerdict::Homoscedastic
    } else {
        WhiteVerdict::Heteroscedastic
    };
    debug_assert_eq!(aux_regressors[0], INTERCEPT);
    Ok(WhiteResult {
        obs_r_squared,
        df,
        p_value,
        f_statistic,
        f_p_value,
        aux_regressors,
        dropped_collinear,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JbVerdict {
    Normal,
    NonNormal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JbResult {
    pub skewness: f64,
    pub kurtosis: f64,
    pub jb_stat: f64,
    pub p_value: f64,
    pub verdict: JbVerdict,
}

/// Jarque-Bera test with population (divisor n) moments.
pub fn jarque_bera(residuals: &[f64], alpha: f64) -> Result<JbResult> {
    let n = residuals.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let (m2, m3, m4) = residuals.iter().fold((0.0, 0.0, 0.0), |(a, b, c), &e| {
        let d = e - mean;
        let d2 = d * d;
        (a + d2, b + d2 * d, c + d2 * d2)
    });
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let scale = residuals.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    if m2 <= (1e-14 * scale).powi(2) {
        return Err(Error::DegenerateResiduals);
    }
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jb_stat = nf / 6.0 * (skewness.powi(2) + (kurtosis - 3.0).powi(2) / 4.0);
    let p_value = dist::chi2_sf(jb_stat, 2.0);
    Ok(JbResult {
        skewness,
        kurtosis,
        jb_stat,
        p_value,
        verdict: jb_verdict(p_value, alpha),
    })
}

/// Normal iff `p_value > alpha`.
pub fn jb_verdict(p_value: f64, alpha: f64) -> JbVerdict {
    if p_value > alpha {
        JbVerdict::Normal
    } else {
        JbVerdict::NonNormal
    }
}

/// The three residual checks run on a final model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub durbin_watson: DwResult,
    /// Absent when the model has no regressor besides the intercept.
    pub white: Option<WhiteResult>,
    pub jarque_bera: JbResult,
}

pub fn diagnose(
    fit: &OlsFit,
    design: &DesignMatrix,
    alpha: f64,
    band: DwBand,
) -> Result<DiagnosticsReport> {
    let white = if design.regressor_names().next().is_some() && design.has_intercept() {
        Some(white_test(fit, design, alpha)?)
    } else {
        None
    };
    Ok(DiagnosticsReport {
        durbin_watson: durbin_watson(&fit.residuals, band)?,
        white,
        jarque_bera: jarque_bera(&fit.residuals, alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dw_closed_forms() {
        let r = durbin_watson(&[1.0, -1.0, 1.0, -1.0], DwBand::default()).unwrap();
        assert_eq!(r.statistic, 3.0);
        assert_eq!(r.verdict, DwVerdict::NoAutocorr);
        let r = durbin_watson(&[1.0, 1.0, -1.0, -1.0], DwBand::default()).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn dw_verdict_bands() {
        let band = DwBand::default();
        let v = |s: f64| {
            if s < band.low {
                DwVerdict::PositiveAutocorr
            } else if s > band.high {
                DwVerdict::NegativeAutocorr
            } else {
                DwVerdict::NoAutocorr
            }
        };
        assert_eq!(v(1.117226), DwVerdict::NoAutocorr);
        let r = durbin_watson(&[1.0, 1.0, 1.0, 1.0, -1.0], band).unwrap();
        assert_eq!(r.verdict, DwVerdict::PositiveAutocorr);
        let r = durbin_watson(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0], band).unwrap();
        assert_eq!(r.verdict, DwVerdict::NegativeAutocorr);
    }

    #[test]
    fn dw_errors() {
        assert_eq!(
            durbin_watson(&[0.0, 0.0, 0.0], DwBand::default()).unwrap_err(),
            Error::DegenerateResiduals
        );
        assert!(matches!(
            durbin_watson(&[1.0], DwBand::default()),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn jb_three_points() {
        let r = jarque_bera(&[-1.0, 0.0, 1.0], 0.05).unwrap();
        assert_eq!(r.skewness, 0.0);
        assert!((r.kurtosis - 1.5).abs() < 1e-15);
        assert!((r.jb_stat - 0.28125).abs() < 1e-15);
        assert!((r.p_value - (-0.140625_f64).exp()).abs() < 1e-14);
        assert_eq!(r.verdict, JbVerdict::Normal);
    }

    #[test]
    fn jb_degenerate() {
        assert_eq!(
            jarque_bera(&[2.0; 5], 0.05).unwrap_err(),
            Error::DegenerateResiduals
        );
        assert!(jarque_bera(&[1.0, 2.0], 0.05).is_err());
    }

    #[test]
    fn jb_replay_verdict() {
        assert_eq!(jb_verdict(0.344723, 0.05), JbVerdict::Normal);
        assert_eq!(jb_verdict(0.01, 0.05), JbVerdict::NonNormal);
    }

    #[test]
    fn white_constant_squared_residuals() {
        let n = 12;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + i as f64 * 0.1).collect();
        let d = DesignMatrix::with_intercept(n).with("X", x).unwrap();
        let e: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.3 } else { -0.3 }).collect();
        let w = white_test_residuals(&e, &d, WhiteOptions::default()).unwrap();
        assert_eq!(w.obs_r_squared, 0.0);
        assert_eq!(w.p_value, 1.0);
        assert_eq!(w.verdict, WhiteVerdict::Homoscedastic);
        assert_eq!(w.df, 2);
    }

    #[test]
    fn white_needs_intercept_and_regressor() {
        let d = DesignMatrix::with_intercept(5);
        assert!(white_auxiliary_design(&d, true).is_err());
        let d = DesignMatrix::new(5).with("X", vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(white_auxiliary_design(&d, true).is_err());
    }

    #[test]
    fn white_without_cross_terms() {
        let d = DesignMatrix::with_intercept(4)
            .with("A", vec![1.0, 2.0, 3.0, 5.0])
            .unwrap()
            .with("B", vec![0.0, 1.0, 0.5, 2.0])
            .unwrap();
        let aux = white_auxiliary_design(&d, false).unwrap();
        assert_eq!(aux.names(), ["C", "A", "A^2", "B", "B^2"]);
        let aux = white_auxiliary_design(&d, true).unwrap();
        assert_eq!(aux.names(), ["C", "A", "A^2", "A*B", "B", "B^2"]);
    }
}
