//! Pipeline configuration, read from a flat TOML document:
//!
//! ```toml
//! dependent = "TX_DEF"
//! regressors = ["LOGPIB_VOL", "TX_DEBI", "MAD_USD"]
//! alpha = 0.05
//! adf_lags = 0          # or "auto"
//! max_diff = 2
//! dw_low = 1.0
//! dw_high = 3.0
//! expected_signs = { LOGPIB_VOL = "negative", TX_DEBI = "positive" }
//! ```
//!
//! Only `dependent` and `regressors` are required. Names are upper-cased.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DwBand;
use crate::unitroot::LagChoice;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedSign {
    pub variable: String,
    pub sign: Sign,
}

impl ExpectedSign {
    pub fn new(variable: impl Into<String>, sign: Sign) -> Self {
        Self {
            variable: variable.into(),
            sign,
        }
    }
}

/// Theoretical effect of each macro driver on the default rate.
pub fn default_expected_signs() -> Vec<ExpectedSign> {
    vec![
        ExpectedSign::new("EPARG_VOL", Sign::Negative),
        ExpectedSign::new("LOGPIB_VOL", Sign::Negative),
        ExpectedSign::new("MAD_EUR", Sign::Ambiguous),
        ExpectedSign::new("MAD_USD", Sign::Ambiguous),
        ExpectedSign::new("TX_CHOM", Sign::Positive),
        ExpectedSign::new("TX_DEBI", Sign::Positive),
        ExpectedSign::new("TX_INFLA", Sign::Ambiguous),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub dependent: String,
    pub regressors: Vec<String>,
    pub alpha: f64,
    pub adf_lags: LagChoice,
    pub max_diff: usize,
    pub dw_band: DwBand,
    pub expected_signs: Vec<ExpectedSign>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dependent: String,
    regressors: Vec<String>,
    alpha: Option<f64>,
    adf_lags: Option<LagChoice>,
    max_diff: Option<usize>,
    dw_low: Option<f64>,
    dw_high: Option<f64>,
    expected_signs: Option<BTreeMap<String, Sign>>,
}

impl PipelineConfig {
    /// Defaults: alpha 0.05, no ADF lags, at most two differences, DW band
    /// [1, 3] and the standard expected-sign registry.
    pub fn new(dependent: impl Into<String>, regressors: Vec<String>) -> Self {
        Self {
            dependent: dependent.into().to_uppercase(),
            regressors: regressors.into_iter().map(|r| r.to_uppercase()).collect(),
            alpha: 0.05,
            adf_lags: LagChoice::default(),
            max_diff: 2,
            dw_band: DwBand::default(),
            expected_signs: default_expected_signs(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = PipelineConfig::new(raw.dependent, raw.regressors);
        if let Some(a) = raw.alpha {
            cfg.alpha = a;
        }
        if let Some(l) = raw.adf_lags {
            cfg.adf_lags = l;
        }
        if let Some(m) = raw.max_diff {
            cfg.max_diff = m;
        }
        if let Some(lo) = raw.dw_low {
            cfg.dw_band.low = lo;
        }
        if let Some(hi) = raw.dw_high {
            cfg.dw_band.high = hi;
        }
        if let Some(signs) = raw.expected_signs {
            let mut list: Vec<ExpectedSign> = Vec::with_capacity(signs.len());
            for (var, sign) in signs {
                let var = var.to_uppercase();
                if list.iter().any(|e| e.variable == var) {
                    return Err(Error::Config(format!("two expected signs for `{var}`")));
                }
                list.push(ExpectedSign::new(var, sign));
            }
            cfg.expected_signs = list;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dependent.is_empty() {
            return Err(Error::Config("dependent must be named".into()));
        }
        if self.regressors.contains(&self.dependent) {
            return Err(Error::Config(format!(
                "`{}` is both dependent and regressor",
                self.dependent
            )));
        }
        for (i, r) in self.regressors.iter().enumerate() {
            if self.regressors[..i].contains(r) {
                return Err(Error::Config(format!("regressor `{r}` listed twice")));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.max_diff == 0 {
            return Err(Error::Config("max_diff must be at least 1".into()));
        }
        let DwBand { low, high } = self.dw_band;
        if low.is_nan() || high.is_nan() || low > high {
            return Err(Error::Config("dw_low must not exceed dw_high".into()));
        }
        Ok(())
    }
}
