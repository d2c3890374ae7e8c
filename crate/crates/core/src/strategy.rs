//! Closed-form maximum-fidelity strategy.
//!
//! Writing `Q_k = (A + C cosθ_k)² + B² (1 − cos²θ_k)` reduces the whole
//! optimization to three numbers. The optimum is always one of the two
//! mirror-symmetric two-element POMs:
//!
//! - left/right `θ_k = ±π/2`: `F = ½ + √(A² + B²)`
//! - up/down `θ_k ∈ {0, π}`: `F = ½ + |A + C|/2 + |A − C|/2`
//!
//! and the sign of `A² + B² − C²` picks between them. When it vanishes every
//! in-plane POM reaches the same fidelity.

use alloc::vec;

use crate::fidelity::{best_fidelity_for_pom, left_right_retransmission, RetransmitMap};
use crate::numeric::hypot;
use crate::qubit::{Ensemble, HermitianOp2, MirrorEnsemble, Pom, QubitState};

/// Tolerance on `A² + B² − C²` for calling a point degenerate.
pub const REGIME_TOL: f64 = 1e-10;

/// Coefficients of `cosθ_k` in `Q_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AbcCoefficients {
    /// Raw coefficients; nothing ties them to a particular ensemble.
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `A² + B² − C²`
    pub fn margin(&self) -> f64 {
        self.a * self.a + self.b * self.b - self.c * self.c
    }

    pub fn q(&self, cos_theta_k: f64) -> f64 {
        let lin = self.a + self.c * cos_theta_k;
        lin * lin + self.b * self.b * (1.0 - cos_theta_k * cos_theta_k)
    }
}

/// `A = p·cos2θ + ½ − p`, `B = p·sin²2θ`, `C = p·cos²2θ + ½ − p`.
pub fn abc_coefficients(e: &MirrorEnsemble) -> AbcCoefficients {
    let p = e.p();
    let cos2 = libm::cos(2.0 * e.theta());
    let sin2 = libm::sin(2.0 * e.theta());
    AbcCoefficients {
        a: p * cos2 + 0.5 - p,
        b: p * sin2 * sin2,
        c: p * cos2 * cos2 + 0.5 - p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `{|+⟩⟨+|, |−⟩⟨−|}` is uniquely optimal.
    UpDown,
    /// The `θ_k = ±π/2` pair is uniquely optimal.
    LeftRight,
    /// Every in-plane POM is optimal.
    Degenerate,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::UpDown => "UpDown",
            Regime::LeftRight => "LeftRight",
            Regime::Degenerate => "Degenerate",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyRegime {
    pub tag: Regime,
    /// Signed `A² + B² − C²`.
    pub margin: f64,
}

/// Which of the three ways the degeneracy condition
/// `p(1 − cos2θ)[p(1 − cos2θ) + cos2θ] = 0` is met.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateBranch {
    /// `p = 0`: only `|+⟩` is ever sent.
    SingleState,
    /// `cos2θ = 1`: all three states coincide.
    IdenticalStates,
    /// `p = −cos2θ/(1 − cos2θ)`, equivalently `Σ_j (1 − p_j)|ψ_j⟩⟨ψ_j| = 1`.
    AntiweightedIdentity,
}

/// Full classification of a mirror ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClassification {
    pub regime: StrategyRegime,
    /// `−cos2θ/(1 − cos2θ)`; absent when `cos2θ = 1`.
    pub threshold: Option<f64>,
    /// `p(1 − cos2θ)[p(1 − cos2θ) + cos2θ]`, which equals the margin.
    pub product_form: f64,
    pub branch: Option<DegenerateBranch>,
    /// `max |Σ_j (1 − p_j)|ψ_j⟩⟨ψ_j| − 1|`
    pub identity_residual: f64,
}

pub fn classify_coefficients(abc: &AbcCoefficients) -> StrategyRegime {
    let margin = abc.margin();
    let tag = if margin < -REGIME_TOL {
        Regime::UpDown
    } else if margin > REGIME_TOL {
        Regime::LeftRight
    } else {
        Regime::Degenerate
    };
    StrategyRegime { tag, margin }
}

/// `−cos2θ/(1 − cos2θ)`: the `p` at which the two strategies tie.
pub fn regime_threshold(theta: f64) -> Option<f64> {
    let cos2 = libm::cos(2.0 * theta);
    (cos2 != 1.0).then(|| -cos2 / (1.0 - cos2))
}

pub fn classify_regime(e: &MirrorEnsemble) -> RegimeClassification {
    let regime = classify_coefficients(&abc_coefficients(e));
    let p = e.p();
    let cos2 = libm::cos(2.0 * e.theta());
    let one_minus = 1.0 - cos2;
    let product_form = p * one_minus * (p * one_minus + cos2);
    let identity_residual = e.antiweighted_sum().max_abs_diff(&HermitianOp2::IDENTITY);
    let branch = (regime.tag == Regime::Degenerate).then_some(if p == 0.0 {
        DegenerateBranch::SingleState
    } else if cos2 == 1.0 || one_minus <= REGIME_TOL {
        DegenerateBranch::IdenticalStates
    } else {
        DegenerateBranch::AntiweightedIdentity
    });
    RegimeClassification {
        regime,
        threshold: regime_threshold(e.theta()),
        product_form,
        branch,
        identity_residual,
    }
}

/// `½ + √(A² + B²)`
pub fn fidelity_left_right(abc: &AbcCoefficients) -> f64 {
    0.5 + hypot(abc.a, abc.b)
}

/// `½ + |A + C|/2 + |A − C|/2`
pub fn fidelity_up_down(abc: &AbcCoefficients) -> f64 {
    0.5 + 0.5 * (abc.a + abc.c).abs() + 0.5 * (abc.a - abc.c).abs()
}

pub fn max_fidelity(abc: &AbcCoefficients) -> f64 {
    fidelity_left_right(abc).max(fidelity_up_down(abc))
}

/// Optimal measurement, retransmissions and fidelity for one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyReport {
    pub regime: StrategyRegime,
    pub pom: Pom,
    pub retrans: RetransmitMap,
    pub fidelity: f64,
    /// Present for the left/right construction when `p·sin²2θ ≠ 0`.
    pub eta: Option<f64>,
    pub abc: AbcCoefficients,
    /// Any in-plane POM is equally good.
    pub degenerate: bool,
}

/// Builds the optimal strategy. The degenerate case returns the left/right
/// construction with `degenerate = true`.
pub fn build_optimal_strategy(e: &MirrorEnsemble) -> StrategyReport {
    let abc = abc_coefficients(e);
    let regime = classify_coefficients(&abc);
    let fidelity = max_fidelity(&abc);

    if regime.tag == Regime::UpDown {
        return StrategyReport {
            regime,
            pom: Pom::up_down(),
            retrans: RetransmitMap::new(vec![QubitState::PLUS, QubitState::MINUS]),
            fidelity,
            eta: None,
            abc,
            degenerate: false,
        };
    }

    let pom = Pom::left_right();
    let (eta, retrans) = match (
        left_right_retransmission(e, 1.0),
        left_right_retransmission(e, -1.0),
    ) {
        (Ok((eta, _, up)), Ok((_, _, down))) => (Some(eta), RetransmitMap::new(vec![up, down])),
        // p·sin²2θ = 0 only happens on the degenerate set; fall back to the
        // eigenvectors there.
        _ => (None, best_fidelity_for_pom(e, &pom).1),
    };
    StrategyReport {
        regime,
        pom,
        retrans,
        fidelity,
        eta,
        abc,
        degenerate: regime.tag == Regime::Degenerate,
    }
}
