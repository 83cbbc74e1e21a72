//! Stepwise specification search over the columns of a design matrix.
//!
//! Backward elimination starts from the full model and removes the least
//! significant regressor while its p-value exceeds `alpha`. Forward selection
//! starts from the intercept and adds the most significant candidate while
//! its p-value is at most `alpha`; once in, a variable stays in. The
//! intercept is never removed.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::ols::{self, DesignMatrix, OlsFit, INTERCEPT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Backward,
    Forward,
}

/// A regressor with the statistics the selection rule looked at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedTerm {
    pub name: String,
    pub abs_t: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecStep {
    pub fit: OlsFit,
    /// Variable removed after this fit (backward).
    pub removed: Option<String>,
    /// Variable added after this fit (forward).
    pub entered: Option<String>,
    /// p-value that justified the removal or entry.
    pub criterion_p_value: Option<f64>,
    /// Backward: the fit's regressors by ascending |t|.
    /// Forward: the candidates, each evaluated when added alone, by descending |t|.
    pub t_ordering: Vec<RankedTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecLadder {
    pub direction: Direction,
    pub alpha: f64,
    pub steps: Vec<SpecStep>,
}

impl SpecLadder {
    pub fn final_fit(&self) -> &OlsFit {
        &self.steps.last().expect("a ladder has at least one step").fit
    }

    /// Regressor names of the final fit, intercept included.
    pub fn final_names(&self) -> Vec<&str> {
        self.final_fit().names().collect()
    }
}

fn check_inputs(design: &DesignMatrix, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !design.has_intercept() {
        return Err(Error::InvalidArgument(
            "stepwise search needs a design with an intercept".into(),
        ));
    }
    Ok(())
}

fn fit_checked(dependent: &str, y: &[f64], design: &DesignMatrix) -> Result<OlsFit> {
    let fit = ols::fit(dependent, y, design)?;
    if fit.is_exact() {
        return Err(Error::DegenerateFit);
    }
    Ok(fit)
}

// Larger p first, then smaller |t|, then name.
fn removal_order(a: &RankedTerm, b: &RankedTerm) -> Ordering {
    b.p_value
        .total_cmp(&a.p_value)
        .then(a.abs_t.total_cmp(&b.abs_t))
        .then_with(|| a.name.cmp(&b.name))
}

// Smaller p first, then larger |t|, then name.
fn entry_order(a: &RankedTerm, b: &RankedTerm) -> Ordering {
    a.p_value
        .total_cmp(&b.p_value)
        .then(b.abs_t.total_cmp(&a.abs_t))
        .then_with(|| a.name.cmp(&b.name))
}

/// Backward elimination.
pub fn backward_eliminate(
    dependent: &str,
    y: &[f64],
    design: &DesignMatrix,
    alpha: f64,
) -> Result<SpecLadder> {
    check_inputs(design, alpha)?;
    let mut current = design.clone();
    let mut steps = Vec::new();
    loop {
        let fit = fit_checked(dependent, y, &current)?;
        let mut ranked: Vec<RankedTerm> = fit
            .coefficients
            .iter()
            .filter(|c| c.name != INTERCEPT)
            .map(|c| RankedTerm {
                name: c.name.clone(),
                abs_t: c.t_stat.abs(),
                p_value: c.p_value,
            })
            .collect();
        let worst = ranked.iter().min_by(|a, b| removal_order(a, b)).cloned();
        ranked.sort_by(|a, b| a.abs_t.total_cmp(&b.abs_t).then_with(|| a.name.cmp(&b.name)));
        match worst {
            Some(w) if w.p_value > alpha => {
                current = current.without(&w.name);
                steps.push(SpecStep {
                    fit,
                    removed: Some(w.name),
                    entered: None,
                    criterion_p_value: Some(w.p_value),
                    t_ordering: ranked,
                });
            }
            _ => {
                steps.push(SpecStep {
                    fit,
                    removed: None,
                    entered: None,
                    criterion_p_value: None,
                    t_ordering: ranked,
                });
                break;
            }
        }
    }
    Ok(SpecLadder {
        direction: Direction::Backward,
        alpha,
        steps,
    })
}

/// Forward selection.
pub fn forward_select(
    dependent: &str,
    y: &[f64],
    design: &DesignMatrix,
    alpha: f64,
) -> Result<SpecLadder> {
    check_inputs(design, alpha)?;
    let mut selected: Vec<&str> = vec![INTERCEPT];
    let mut fit = fit_checked(dependent, y, &design.select(&selected))?;
    let mut steps = Vec::new();
    loop {
        let mut ranked = Vec::new();
        for cand in design.regressor_names().filter(|n| !selected.contains(n)) {
            let mut trial = selected.clone();
            trial.push(cand);
            let trial_fit = match fit_checked(dependent, y, &design.select(&trial)) {
                Ok(f) => f,
                Err(Error::RankDeficient { .. } | Error::InsufficientObservations { .. }) => {
                    continue
                }
                Err(e) => return Err(e),
            };
            let c = trial_fit
                .coefficient(cand)
                .expect("candidate column is in the trial design");
            ranked.push(RankedTerm {
                name: cand.to_string(),
                abs_t: c.t_stat.abs(),
                p_value: c.p_value,
            });
        }
        ranked.sort_by(entry_order);
        match ranked.first().cloned() {
            Some(best) if best.p_value <= alpha => {
                let name = design
                    .regressor_names()
                    .find(|n| *n == best.name)
                    .expect("candidate comes from the design");
                selected.push(name);
                let next = fit_checked(dependent, y, &design.select(&selected))?;
                steps.push(SpecStep {
                    fit: std::mem::replace(&mut fit, next),
                    removed: None,
                    entered: Some(best.name),
                    criterion_p_value: Some(best.p_value),
                    t_ordering: ranked,
                });
            }
            _ => {
                steps.push(SpecStep {
                    fit,
                    removed: None,
                    entered: None,
                    criterion_p_value: None,
                    t_ordering: ranked,
                });
                break;
            }
        }
    }
    Ok(SpecLadder {
        direction: Direction::Forward,
        alpha,
        steps,
    })
}

pub fn stepwise(
    direction: Direction,
    dependent: &str,
    y: &[f64],
    design: &DesignMatrix,
    alpha: f64,
) -> Result<SpecLadder> {
    match direction {
        Direction::Backward => backward_eliminate(dependent, y, design, alpha),
        Direction::Forward => forward_select(dependent, y, design, alpha),
    }
}
