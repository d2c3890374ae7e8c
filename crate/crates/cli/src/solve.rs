use mirror_fidelity::fidelity::best_fidelity_for_pom;
use mirror_fidelity::min_error::{min_error_strategy, regime_comparison};
use mirror_fidelity::strategy::{build_optimal_strategy, fidelity_left_right, fidelity_up_down};
use mirror_fidelity::{MirrorEnsemble, Pom, QubitState};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Input {
    pub p: f64,
    pub theta_deg: f64,
    pub theta_rad: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FidelityStrategy {
    pub regime: String,
    pub degenerate: bool,
    pub fidelity: f64,
    pub f_lr: f64,
    pub f_ud: f64,
    pub pom: Pom,
    pub retransmissions: Vec<QubitState>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinErrorStrategy {
    pub regime: String,
    pub a_param: f64,
    pub p_error: f64,
    pub pom: Pom,
    /// Fidelity of this POM with its best retransmissions.
    pub fidelity: f64,
    pub retransmissions: Vec<QubitState>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub input: Input,
    pub coefficients: Coefficients,
    pub margin: f64,
    pub eta: Option<f64>,
    pub fidelity_strategy: FidelityStrategy,
    pub min_error_strategy: MinErrorStrategy,
    pub minerror_pom_maximizes_fidelity: bool,
}

pub fn solve(e: &MirrorEnsemble) -> SolveReport {
    let s = build_optimal_strategy(e);
    let me = min_error_strategy(e);
    let (me_fidelity, me_retrans) = best_fidelity_for_pom(e, &me.pom);
    let cmp = regime_comparison(e);
    SolveReport {
        input: Input {
            p: e.p(),
            theta_deg: e.theta().to_degrees(),
            theta_rad: e.theta(),
        },
        coefficients: Coefficients {
            a: s.abc.a,
            b: s.abc.b,
            c: s.abc.c,
        },
        margin: s.regime.margin,
        eta: s.eta,
        fidelity_strategy: FidelityStrategy {
            regime: s.regime.tag.to_string(),
            degenerate: s.degenerate,
            fidelity: s.fidelity,
            f_lr: fidelity_left_right(&s.abc),
            f_ud: fidelity_up_down(&s.abc),
            pom: s.pom,
            retransmissions: s.retrans.states,
        },
        min_error_strategy: MinErrorStrategy {
            regime: me.regime.to_string(),
            a_param: me.a_param,
            p_error: me.p_error,
            pom: me.pom,
            fidelity: me_fidelity,
            retransmissions: me_retrans.states,
        },
        minerror_pom_maximizes_fidelity: cmp.minerror_pom_maximizes_fidelity,
    }
}
