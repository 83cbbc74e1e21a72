//! Ordinary least squares with classical inference.
//!
//! The solver uses a Householder QR factorization. Column rank is checked as
//! columns are processed: a column whose residual after projection onto the
//! columns already accepted has norm below [`COLLINEARITY_TOL`] times its own
//! norm is treated as collinear.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dist;
use crate::{Error, Result};

/// Name of the constant-ones column.
pub const INTERCEPT: &str = "C";

/// Relative residual norm under which a column counts as collinear.
pub const COLLINEARITY_TOL: f64 = 1e-10;

// A fit whose residual norm is below this fraction of ‖y‖ is exact.
const EXACT_FIT_TOL: f64 = 1e-12;

/// Named regressor columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    nrows: usize,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DesignMatrix {
    /// An empty design with `nrows` observations.
    pub fn new(nrows: usize) -> Self {
        Self {
            nrows,
            names: Vec::new(),
            columns: Vec::new(),
        }
    }

    /// A design holding only the intercept column.
    pub fn with_intercept(nrows: usize) -> Self {
        let mut d = Self::new(nrows);
        d.names.push(INTERCEPT.to_string());
        d.columns.push(vec![1.0; nrows]);
        d
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.nrows {
            return Err(Error::InvalidArgument(format!(
                "column `{name}` has {} rows, design has {}",
                values.len(),
                self.nrows
            )));
        }
        if self.names.contains(&name) {
            return Err(Error::DuplicateColumn(name));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "column `{name}` has non-finite entries"
            )));
        }
        if name == INTERCEPT && values.iter().any(|&v| v != 1.0) {
            return Err(Error::InvalidArgument(
                "the intercept column must be all ones".into(),
            ));
        }
        self.names.push(name);
        self.columns.push(values);
        Ok(())
    }

    /// Builder form of [`push`](Self::push).
    pub fn with(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        self.push(name, values)?;
        Ok(self)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|i| self.columns[i].as_slice())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn has_intercept(&self) -> bool {
        self.index_of(INTERCEPT).is_some()
    }

    /// Non-intercept column names in design order.
    pub fn regressor_names(&self) -> impl Iterator<Item = &str> {
        self.names
            .iter()
            .map(String::as_str)
            .filter(|n| *n != INTERCEPT)
    }

    /// Copy of the design restricted to the named columns, in design order.
    pub fn select(&self, keep: &[&str]) -> DesignMatrix {
        let mut out = DesignMatrix::new(self.nrows);
        for (name, col) in self.names.iter().zip(&self.columns) {
            if keep.contains(&name.as_str()) {
                out.names.push(name.clone());
                out.columns.push(col.clone());
            }
        }
        out
    }

    pub fn without(&self, name: &str) -> DesignMatrix {
        let keep: Vec<&str> = self
            .names
            .iter()
            .map(String::as_str)
            .filter(|n| *n != name)
            .collect();
        self.select(&keep)
    }
}

/// Householder QR of a set of columns, skipping collinear ones.
pub(crate) struct Factorization {
    nrows: usize,
    /// Unit Householder vectors; reflector `i` acts on rows `i..`.
    reflectors: Vec<Vec<f64>>,
    /// Columns of R (column `j` holds rows `0..=j`).
    r: Vec<Vec<f64>>,
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

impl Factorization {
    pub fn new(columns: &[Vec<f64>], nrows: usize) -> Self {
        let mut f = Factorization {
            nrows,
            reflectors: Vec::new(),
            r: Vec::new(),
            kept: Vec::new(),
            dropped: Vec::new(),
        };
        for (j, col) in columns.iter().enumerate() {
            let norm = l2(col);
            let mut a = col.clone();
            f.apply_qt(&mut a);
            let row = f.reflectors.len();
            let tail_norm = if row < nrows { l2(&a[row..]) } else { 0.0 };
            if norm == 0.0 || tail_norm < COLLINEARITY_TOL * norm {
                f.dropped.push(j);
                continue;
            }
            let alpha = if a[row] > 0.0 { -tail_norm } else { tail_norm };
            let mut v = a[row..].to_vec();
            v[0] -= alpha;
            let vn = l2(&v);
            v.iter_mut().for_each(|x| *x /= vn);
            let mut rcol = a[..row].to_vec();
            rcol.push(alpha);
            f.reflectors.push(v);
            f.r.push(rcol);
            f.kept.push(j);
        }
        f
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    /// Overwrite `y` with Qᵀy.
    fn apply_qt(&self, y: &mut [f64]) {
        for (i, v) in self.reflectors.iter().enumerate() {
            let seg = &mut y[i..self.nrows];
            let dot: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
            seg.iter_mut().zip(v).for_each(|(a, b)| *a -= 2.0 * dot * b);
        }
    }

    /// Least-squares coefficients for the kept columns.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, y: &[f64]) -> Vec<f64> {
        let mut qty = y.to_vec();
        self.apply_qt(&mut qty);
        let k = self.rank();
        let mut beta = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = qty[i];
            for j in i + 1..k {
                acc -= self.r[j][i] * beta[j];
            }
            beta[i] = acc / self.r[i][i];
        }
        beta
    }

    /// Diagonal of (RᵀR)⁻¹ = (XᵀX)⁻¹.
    #[allow(clippy::needless_range_loop)]
    fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let k = self.rank();
        // rinv[j] is column j of R⁻¹ (rows 0..=j).
        let mut rinv: Vec<Vec<f64>> = Vec::with_capacity(k);
        for j in 0..k {
            let mut col = vec![0.0; j + 1];
            col[j] = 1.0 / self.r[j][j];
            for i in (0..j).rev() {
                let mut acc = 0.0;
                for m in i + 1..=j {
                    acc += self.r[m][i] * col[m];
                }
                col[i] = -acc / self.r[i][i];
            }
            rinv.push(col);
        }
        (0..k)
            .map(|i| (i..k).map(|j| rinv[j][i] * rinv[j][i]).sum())
            .collect()
    }
}

fn l2(x: &[f64]) -> f64 {
    // scaled to avoid overflow on large columns
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

/// One row of a regression table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

/// Result of an OLS regression.
///
/// On an exact fit (zero residual variance) standard errors are zero,
/// t-statistics are infinite (zero for a zero coefficient) and p-values are
/// 0 (or 1). Use [`OlsFit::is_exact`] to detect this case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub dependent: String,
    pub coefficients: Vec<Coefficient>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    /// Sum of squared residuals.
    pub ssr: f64,
    /// Standard error of the regression, sqrt(SSR / dof).
    pub sigma: f64,
    pub nobs: usize,
    pub dof: usize,
    pub durbin_watson: Option<f64>,
}

impl OlsFit {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.coefficients.iter().map(|c| c.name.as_str())
    }

    pub fn has_intercept(&self) -> bool {
        self.coefficient(INTERCEPT).is_some()
    }

    pub fn is_exact(&self) -> bool {
        self.sigma == 0.0
    }

    /// Fitted values y − ε̂.
    pub fn fitted(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.residuals).map(|(y, e)| y - e).collect()
    }

    pub fn predict(&self, x: &HashMap<String, f64>) -> Result<f64> {
        predict(
            self.coefficients.iter().map(|c| (c.name.as_str(), c.estimate)),
            x,
        )
    }
}

/// Evaluate a linear model: intercept + Σ βᵢ·xᵢ.
pub fn predict<'a, I>(coefficients: I, x: &HashMap<String, f64>) -> Result<f64>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    coefficients.into_iter().try_fold(0.0, |acc, (name, beta)| {
        if name == INTERCEPT {
            return Ok(acc + beta);
        }
        let v = x
            .get(name)
            .ok_or_else(|| Error::MissingRegressor(name.to_string()))?;
        Ok(acc + beta * v)
    })
}

/// Fit `y` on the design by least squares.
pub fn fit(dependent: &str, y: &[f64], design: &DesignMatrix) -> Result<OlsFit> {
    let n = design.nrows();
    let k = design.ncols();
    if y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "dependent has {} rows, design has {n}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("dependent has non-finite entries".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("design has no columns".into()));
    }
    if n <= k {
        return Err(Error::InsufficientObservations { n, k });
    }
    let qr = Factorization::new(design.columns(), n);
    if let Some(&j) = qr.dropped.first() {
        return Err(Error::RankDeficient {
            column: design.names()[j].clone(),
        });
    }
    let beta = qr.solve(y);

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = design
                .columns()
                .iter()
                .zip(&beta)
                .map(|(col, b)| b * col[i])
                .sum();
            y[i] - fitted
        })
        .collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = n - k;
    let y_norm = l2(y);
    let exact = ssr.sqrt() <= EXACT_FIT_TOL * y_norm;
    let s2 = if exact { 0.0 } else { ssr / dof as f64 };

    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if sst.sqrt() <= EXACT_FIT_TOL * y_norm {
        0.0
    } else {
        1.0 - ssr / sst
    };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) as f64 / dof as f64;

    let gram_diag = qr.inverse_gram_diagonal();
    let coefficients = design
        .names()
        .iter()
        .zip(beta.iter().zip(&gram_diag))
        .map(|(name, (&estimate, &g))| {
            let std_error = (s2 * g).sqrt();
            let t_stat = if std_error > 0.0 {
                estimate / std_error
            } else if estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(estimate)
            };
            Coefficient {
                name: name.clone(),
                estimate,
                std_error,
                t_stat,
                p_value: dist::student_t_two_sided(t_stat, dof as f64),
            }
        })
        .collect();

    let durbin_watson = if exact {
        None
    } else {
        crate::diagnostics::dw_statistic(&residuals)
    };

    Ok(OlsFit {
        dependent: dependent.to_string(),
        coefficients,
        residuals,
        r_squared,
        adj_r_squared,
        ssr,
        sigma: s2.sqrt(),
        nobs: n,
        dof,
        durbin_watson,
    })
}

/// Two-sided Student-t critical value for `dof` degrees of freedom.
pub fn t_critical(dof: usize, alpha: f64) -> Result<f64> {
    dist::t_critical(dof as f64, alpha)
}
