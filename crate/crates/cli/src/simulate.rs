use std::str::FromStr;

use mirror_fidelity::fidelity::best_fidelity_for_pom;
use mirror_fidelity::min_error::min_error_strategy;
use mirror_fidelity::oracle::{monte_carlo_fidelity_with, IndexMap};
use mirror_fidelity::strategy::build_optimal_strategy;
use mirror_fidelity::{MirrorEnsemble, Pom, RetransmitMap};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyChoice {
    Optimal,
    Minerror,
    Upd,
    Lr,
}

impl StrategyChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyChoice::Optimal => "optimal",
            StrategyChoice::Minerror => "minerror",
            StrategyChoice::Upd => "upd",
            StrategyChoice::Lr => "lr",
        }
    }

    /// The POM, its retransmissions and the exact fidelity.
    pub fn strategy(&self, e: &MirrorEnsemble) -> (Pom, RetransmitMap, f64) {
        let with_best = |pom: Pom| {
            let (f, map) = best_fidelity_for_pom(e, &pom);
            (pom, map, f)
        };
        match self {
            StrategyChoice::Optimal => {
                let s = build_optimal_strategy(e);
                (s.pom, s.retrans, s.fidelity)
            }
            StrategyChoice::Minerror => with_best(min_error_strategy(e).pom),
            StrategyChoice::Upd => with_best(Pom::up_down()),
            StrategyChoice::Lr => with_best(Pom::left_right()),
        }
    }
}

impl FromStr for StrategyChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(StrategyChoice::Optimal),
            "minerror" => Ok(StrategyChoice::Minerror),
            "upd" => Ok(StrategyChoice::Upd),
            "lr" => Ok(StrategyChoice::Lr),
            other => Err(CliError::Usage(format!(
                "unknown strategy '{other}' (expected optimal, minerror, upd or lr)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub strategy: StrategyChoice,
    pub p: f64,
    pub theta_deg: f64,
    pub trials: u64,
    pub seed: u64,
    pub passes: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// Exact fidelity of the simulated strategy.
    pub analytic: f64,
    /// `(estimate − analytic)/σ` with `σ² = analytic(1 − analytic)/trials`.
    pub z_score: Option<f64>,
    pub max_fidelity: f64,
    pub z_vs_max: Option<f64>,
}

/// `None` when the reference has zero variance and the estimate differs.
fn z_against(estimate: f64, reference: f64, trials: u64) -> Option<f64> {
    let sigma = (reference * (1.0 - reference) / trials as f64)
        .max(0.0)
        .sqrt();
    let diff = estimate - reference;
    if sigma > 0.0 {
        Some(diff / sigma)
    } else if diff.abs() < 1e-12 {
        Some(0.0)
    } else {
        None
    }
}

pub fn simulate<M: IndexMap>(
    e: &MirrorEnsemble,
    choice: StrategyChoice,
    trials: u64,
    seed: u64,
    mapper: &M,
) -> Result<SimulationReport> {
    let (pom, retrans, analytic) = choice.strategy(e);
    let mc = monte_carlo_fidelity_with(e, &pom, &retrans, trials, seed, mapper)?;
    let max_fidelity = build_optimal_strategy(e).fidelity;
    Ok(SimulationReport {
        strategy: choice,
        p: e.p(),
        theta_deg: e.theta().to_degrees(),
        trials,
        seed,
        passes: mc.passes,
        estimate: mc.estimate,
        std_error: mc.std_error,
        analytic,
        z_score: z_against(mc.estimate, analytic, trials),
        max_fidelity,
        z_vs_max: z_against(mc.estimate, max_fidelity, trials),
    })
}
