//! Time-series econometrics for modelling bank default rates against
//! macroeconomic drivers.
//!
//! The crate covers the whole workflow: quarterly series handling, OLS with
//! full inference, Dickey-Fuller unit-root testing with MacKinnon critical
//! values, backward/forward stepwise specification search, residual
//! diagnostics (Durbin-Watson, White, Jarque-Bera) and an end-to-end
//! pipeline that reads a CSV panel and emits a report.

pub mod diagnostics;
pub mod dist;
mod error;
pub mod ols;
pub mod pipeline;
pub mod series;
pub mod stepwise;
pub mod unitroot;

pub use error::{Error, Result};
