use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::assign::Strategy;
use crate::meshgen::{DEFAULT_COVERAGE_M, DEFAULT_THRESHOLD_K};
use crate::payment::{HopPolicy, Sat, DEFAULT_AMOUNTS};

pub const DEFAULT_INTERVAL_S: f64 = 600.0;

fn default_coverage() -> f64 {
    DEFAULT_COVERAGE_M
}
fn default_threshold() -> usize {
    DEFAULT_THRESHOLD_K
}
fn default_interval() -> f64 {
    DEFAULT_INTERVAL_S
}
fn default_amounts() -> Vec<Sat> {
    DEFAULT_AMOUNTS.to_vec()
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub strategy: Strategy,
    pub payments_per_epoch: usize,
    pub total_investment: Sat,
    #[serde(default = "default_coverage")]
    pub coverage_d: f64,
    #[serde(default = "default_threshold")]
    pub threshold_k: usize,
    #[serde(default = "default_interval")]
    pub epoch_interval: f64,
    /// Run seed; the workload and UST streams are derived from it.
    pub seed: u64,
    #[serde(default = "default_amounts")]
    pub amounts: Vec<Sat>,
    #[serde(default)]
    pub hop_policy: HopPolicy,
}

impl ExperimentConfig {
    pub fn new(
        strategy: Strategy,
        payments_per_epoch: usize,
        total_investment: Sat,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            strategy,
            payments_per_epoch,
            total_investment,
            coverage_d: DEFAULT_COVERAGE_M,
            threshold_k: DEFAULT_THRESHOLD_K,
            epoch_interval: DEFAULT_INTERVAL_S,
            seed,
            amounts: default_amounts(),
            hop_policy: HopPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.total_investment == 0 {
            return bad("total investment must be positive".into());
        }
        if self.threshold_k == 0 {
            return bad("threshold k must be at least 1".into());
        }
        if !(self.coverage_d > 0.0 && self.coverage_d.is_finite()) {
            return bad(format!(
                "coverage d must be positive, got {}",
                self.coverage_d
            ));
        }
        if !(self.epoch_interval > 0.0 && self.epoch_interval.is_finite()) {
            return bad(format!(
                "epoch interval must be positive, got {}",
                self.epoch_interval
            ));
        }
        if self.amounts.is_empty() || self.amounts.contains(&0) {
            return bad("amount list must be non-empty and positive".into());
        }
        Ok(())
    }
}

/// Parameter lists swept as a Cartesian product over every scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub strategies: Vec<Strategy>,
    pub payments_per_epoch: Vec<usize>,
    pub investments: Vec<Sat>,
    #[serde(default = "default_coverage")]
    pub coverage_d: f64,
    #[serde(default = "default_threshold")]
    pub threshold_k: usize,
    #[serde(default = "default_interval")]
    pub epoch_interval: f64,
    pub seed_base: u64,
    #[serde(default = "default_amounts")]
    pub amounts: Vec<Sat>,
    #[serde(default)]
    pub hop_policy: HopPolicy,
}

impl SweepGrid {
    /// All three strategies, the full payment-rate list, one investment.
    pub fn standard(investment: Sat, seed_base: u64) -> Self {
        SweepGrid {
            strategies: Strategy::ALL.to_vec(),
            payments_per_epoch: (2..=10).map(|n| n * 10).collect(),
            investments: vec![investment],
            coverage_d: DEFAULT_COVERAGE_M,
            threshold_k: DEFAULT_THRESHOLD_K,
            epoch_interval: DEFAULT_INTERVAL_S,
            seed_base,
            amounts: default_amounts(),
            hop_policy: HopPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.strategies.is_empty()
            || self.payments_per_epoch.is_empty()
            || self.investments.is_empty()
        {
            return Err(ExperimentError::Config(
                "sweep grid has an empty parameter list".into(),
            ));
        }
        self.config(
            Strategy::Cds,
            self.payments_per_epoch[0],
            self.investments[0],
            0,
        )
        .validate()
    }

    /// Number of runs per scenario.
    pub fn runs_per_scenario(&self) -> usize {
        self.strategies.len() * self.payments_per_epoch.len() * self.investments.len()
    }

    pub(crate) fn config(
        &self,
        strategy: Strategy,
        n: usize,
        investment: Sat,
        seed: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            strategy,
            payments_per_epoch: n,
            total_investment: investment,
            coverage_d: self.coverage_d,
            threshold_k: self.threshold_k,
            epoch_interval: self.epoch_interval,
            seed,
            amounts: self.amounts.clone(),
            hop_policy: self.hop_policy,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_defaults_fill_in() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"strategy":"ust","payments_per_epoch":20,"total_investment":50000,"seed":1}"#,
        )
        .unwrap();
        assert_eq!(c, ExperimentConfig::new(Strategy::Ust, 20, 50_000, 1));
        assert_eq!(c.coverage_d, 90.0);
        assert_eq!(c.threshold_k, 5);
        assert_eq!(c.epoch_interval, 600.0);
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::new(Strategy::Cds, 20, 0, 1);
        assert!(c.validate().is_err());
        c.total_investment = 10;
        assert!(c.validate().is_ok());
        c.amounts = vec![];
        assert!(c.validate().is_err());
    }

    #[test]
    fn standard_grid_shape() {
        let g = SweepGrid::standard(100_000, 0);
        assert_eq!(g.runs_per_scenario(), 27);
        assert_eq!(
            g.payments_per_epoch,
            vec![20, 30, 40, 50, 60, 70, 80, 90, 100]
        );
    }
}
