use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::config::SuiteConfig;
use crate::harness::trial::{run_trial, static_choice, TrialRecord};

/// Reporting order of the capacity models. "dynamic" repeats the
/// configured headline mode so downstream readers never have to know
/// which one it was.
pub const MODEL_ORDER: [&str; 8] = [
    "dynamic",
    "dynamic-expectation",
    "dynamic-raw",
    "dynamic-exact",
    "mceliece",
    "lowe-bias",
    "lowe-corr",
    "maximum",
];

/// Accuracy and efficiency of one model across a suite.
#[derive(Debug, Clone, Serialize)]
pub struct ModelAggregate {
    pub model: String,
    pub trials: usize,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub efficiency_mean: f64,
    pub efficiency_std: f64,
}

/// All trials of one configuration plus their aggregates.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub config: SuiteConfig,
    /// Parameters the static baselines were sized from.
    pub worst_case_bias: f64,
    pub worst_case_corr: f64,
    /// Baseline the selection rule would deploy for this configuration.
    pub static_choice: String,
    pub c0_mean: f64,
    pub c0_std: f64,
    pub measured_bias_mean: f64,
    pub measured_corr_mean: f64,
    /// Fraction of trials whose headline flag came at or before the
    /// first failing store.
    pub safety: f64,
    /// Fraction whose headline flag came while all patterns were still
    /// intact.
    pub preserved: f64,
    pub censored: usize,
    pub aggregates: Vec<ModelAggregate>,
    pub records: Vec<TrialRecord>,
}

impl SuiteSummary {
    pub fn aggregate(&self, model: &str) -> Option<&ModelAggregate> {
        self.aggregates.iter().find(|a| a.model == model)
    }

    /// The aggregate of the baseline the selection rule picked.
    pub fn chosen_static(&self) -> &ModelAggregate {
        self.aggregate(&self.static_choice)
            .expect("choice is always in the aggregate list")
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Run every trial of a configuration in parallel and aggregate. Trials
/// derive their randomness from their own index, so the thread schedule
/// cannot change any number in the output.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(&cfg.trial, i))
        .collect::<Result<Vec<_>>>()?;
    summarize(cfg, records)
}

fn summarize(cfg: &SuiteConfig, records: Vec<TrialRecord>) -> Result<SuiteSummary> {
    if records.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut aggregates = Vec::with_capacity(MODEL_ORDER.len());
    for name in MODEL_ORDER {
        let mut accuracy = Vec::with_capacity(records.len());
        let mut efficiency = Vec::with_capacity(records.len());
        for rec in &records {
            let outcome = rec
                .models
                .iter()
                .find(|m| m.model == name)
                .ok_or_else(|| Error::StateMismatch(format!("trial missing model {name}")))?;
            accuracy.push(outcome.accuracy);
            efficiency.push(outcome.efficiency);
        }
        aggregates.push(ModelAggregate {
            model: name.to_string(),
            trials: records.len(),
            accuracy_mean: mean(&accuracy),
            accuracy_std: sample_std(&accuracy),
            efficiency_mean: mean(&efficiency),
            efficiency_std: sample_std(&efficiency),
        });
    }

    let c0: Vec<f64> = records.iter().map(|r| r.true_capacity as f64).collect();
    let (b_wc, c_wc) = cfg.trial.worst_case_params();
    Ok(SuiteSummary {
        worst_case_bias: b_wc,
        worst_case_corr: c_wc,
        static_choice: static_choice(&cfg.trial).to_string(),
        c0_mean: mean(&c0),
        c0_std: sample_std(&c0),
        measured_bias_mean: mean(&records.iter().map(|r| r.measured_bias).collect::<Vec<_>>()),
        measured_corr_mean: mean(
            &records
                .iter()
                .map(|r| r.measured_correlation)
                .collect::<Vec<_>>(),
        ),
        safety: records.iter().filter(|r| r.flagged_before_loss).count() as f64
            / records.len() as f64,
        preserved: records.iter().filter(|r| r.preserved_all).count() as f64 / records.len() as f64,
        censored: records.iter().filter(|r| r.censored).count(),
        aggregates,
        records,
        config: cfg.clone(),
    })
}
