//! Minimum-error discrimination of the mirror ensemble, and how it fares as
//! a measure-and-retransmit strategy.
//!
//! Above the threshold `p ≥ 1/(2 + cosθ(cosθ + sinθ))` the optimum is the
//! `±π/2` pair that separates the mirror states. Below it a third element
//! along `|+⟩` appears:
//!
//! ```text
//! Π₁ = ½(a|+⟩ + |−⟩)(a⟨+| + ⟨−|)
//! Π₂ = ½(a|+⟩ − |−⟩)(a⟨+| − ⟨−|)
//! Π₃ = (1 − a²)|+⟩⟨+|,      a = p·cosθ·sinθ / (1 − p(2 + cos²θ))
//! ```
//!
//! Outcome `k` is read as "the signal was `ψ_k`".

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fidelity::best_fidelity_for_pom;
use crate::numeric::stable_sum;
use crate::qubit::{Ensemble, MirrorEnsemble, Pom, PomElement, QubitState};
use crate::strategy::{abc_coefficients, classify_coefficients, max_fidelity, Regime};
use crate::REPR_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinErrorRegime {
    TwoElement,
    ThreeElement,
}

impl MinErrorRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            MinErrorRegime::TwoElement => "TwoElement",
            MinErrorRegime::ThreeElement => "ThreeElement",
        }
    }
}

impl core::fmt::Display for MinErrorRegime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinErrorReport {
    pub regime: MinErrorRegime,
    /// `a ∈ (0, 1]`; exactly 1 in the two-element regime.
    pub a_param: f64,
    /// `Π₁, Π₂[, Π₃]`
    pub pom: Pom,
    pub p_error: f64,
}

/// `1/(2 + cosθ(cosθ + sinθ))`
pub fn min_error_threshold(theta: f64) -> f64 {
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    1.0 / (2.0 + c * (c + s))
}

/// `a = p·cosθ·sinθ / (1 − p(2 + cos²θ))`
pub fn a_parameter(p: f64, theta: f64) -> f64 {
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    p * c * s / (1.0 - p * (2.0 + c * c))
}

/// `Π₁ = ½(|+⟩ + |−⟩)(⟨+| + ⟨−|)`, `Π₂ = ½(|+⟩ − |−⟩)(⟨+| − ⟨−|)`.
pub fn two_element_pom() -> Pom {
    Pom::left_right()
}

/// The three-element construction for a given `a`. `Π₃` is dropped when
/// its weight `1 − a²` is within 1e−12 of zero.
pub fn three_element_pom(a: f64) -> Pom {
    let pair = |sign: f64| {
        let v = QubitState::normalized(Complex64::new(a, 0.0), Complex64::new(sign, 0.0))
            .expect("(a, ±1) is nonzero");
        // ½(a|+⟩ ± |−⟩)(…) has trace (a² + 1)/2.
        PomElement::from_weighted_projector(0.5 * (a * a + 1.0), &v).expect("finite weight")
    };
    let mut elements: Vec<PomElement> = alloc::vec![pair(1.0), pair(-1.0)];
    let rest = 1.0 - a * a;
    if rest > REPR_TOL {
        elements.push(PomElement::from_weighted_projector(rest, &QubitState::PLUS).unwrap());
    }
    Pom::from_elements(elements)
}

/// `1 − Σ_k p_k ⟨ψ_k|Π_k|ψ_k⟩`, outcome `k` guessing signal `k`.
pub fn indexed_error_probability<E: Ensemble + ?Sized>(ensemble: &E, pom: &Pom) -> f64 {
    let correct = stable_sum(
        ensemble
            .signals()
            .iter()
            .zip(pom.iter())
            .map(|(s, el)| s.prior * el.matrix().expectation(&s.state)),
    );
    (1.0 - correct).clamp(0.0, 1.0)
}

/// Error probability when each outcome is read as the signal with the
/// largest joint probability `p_j⟨ψ_j|Π_k|ψ_j⟩`.
pub fn bayes_error_probability<E: Ensemble + ?Sized>(ensemble: &E, pom: &Pom) -> f64 {
    let correct = stable_sum(pom.iter().map(|el| {
        ensemble
            .signals()
            .iter()
            .map(|s| s.prior * el.matrix().expectation(&s.state))
            .fold(0.0, f64::max)
    }));
    (1.0 - correct).clamp(0.0, 1.0)
}

pub fn min_error_strategy(e: &MirrorEnsemble) -> MinErrorReport {
    let (regime, a_param, pom) = if e.p() >= min_error_threshold(e.theta()) {
        (MinErrorRegime::TwoElement, 1.0, two_element_pom())
    } else {
        let a = a_parameter(e.p(), e.theta()).min(1.0);
        (MinErrorRegime::ThreeElement, a, three_element_pom(a))
    };
    let p_error = indexed_error_probability(e, &pom);
    MinErrorReport {
        regime,
        a_param,
        pom,
        p_error,
    }
}

/// Minimum-error strategy versus maximum-fidelity strategy at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeComparison {
    pub fidelity_regime: Regime,
    pub minerror_regime: MinErrorRegime,
    /// Fidelity of the min-error POM with its best retransmissions.
    pub minerror_fidelity: f64,
    pub max_fidelity: f64,
    pub minerror_pom_maximizes_fidelity: bool,
}

/// Agreement threshold between the two fidelities.
pub const AGREE_TOL: f64 = 1e-9;

pub fn regime_comparison(e: &MirrorEnsemble) -> RegimeComparison {
    let abc = abc_coefficients(e);
    let fidelity_regime = classify_coefficients(&abc).tag;
    let me = min_error_strategy(e);
    let minerror_fidelity = best_fidelity_for_pom(e, &me.pom).0;
    let best = max_fidelity(&abc);
    RegimeComparison {
        fidelity_regime,
        minerror_regime: me.regime,
        minerror_fidelity,
        max_fidelity: best,
        minerror_pom_maximizes_fidelity: (best - minerror_fidelity).abs() <= AGREE_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{validate_pom, HermitianOp2};
    use core::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn orthogonal_pair_is_error_free() {
        let r = min_error_strategy(&MirrorEnsemble::new(0.5, FRAC_PI_4).unwrap());
        assert_eq!(r.regime, MinErrorRegime::TwoElement);
        assert_eq!(r.a_param, 1.0);
        assert!(r.p_error.abs() < 1e-15);
    }

    #[test]
    fn three_element_example() {
        let r = min_error_strategy(&MirrorEnsemble::new(0.2, FRAC_PI_4).unwrap());
        assert_eq!(r.regime, MinErrorRegime::ThreeElement);
        assert!((r.a_param - 0.2).abs() < 1e-15);
        assert_eq!(r.pom.len(), 3);
        let pi3 = r.pom.elements()[2].matrix();
        assert!(pi3.max_abs_diff(&HermitianOp2::real(0.96, 0.0, 0.0)) < 1e-15);
        // Π₁ = ½[[a², a], [a, 1]]
        let pi1 = r.pom.elements()[0].matrix();
        assert!(pi1.max_abs_diff(&HermitianOp2::real(0.02, 0.1, 0.5)) < 1e-15);
        // 2·0.2·½(0.2/√2 + 1/√2)² + 0.6·0.96 = 0.144 + 0.576
        assert!((r.p_error - 0.28).abs() < 1e-14);
        assert!(validate_pom(&r.pom).is_valid());
    }

    #[test]
    fn boundary_collapses_to_two_elements() {
        let th = 0.9;
        let p = min_error_threshold(th);
        assert!((a_parameter(p, th) - 1.0).abs() < 1e-14);
        let r = min_error_strategy(&MirrorEnsemble::new(p, th).unwrap());
        assert_eq!(r.regime, MinErrorRegime::TwoElement);
        let three = three_element_pom(a_parameter(p, th));
        assert_eq!(three.len(), 2);
        assert!(three.max_element_diff(&two_element_pom()).unwrap() < 1e-14);
    }

    #[test]
    fn threshold_at_zero_angle_is_one_third() {
        assert!((min_error_threshold(0.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!((min_error_threshold(FRAC_PI_4) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn comparison_examples() {
        let c = regime_comparison(&MirrorEnsemble::new(0.5, FRAC_PI_4).unwrap());
        assert!(c.minerror_pom_maximizes_fidelity);
        assert_eq!(c.fidelity_regime, Regime::LeftRight);

        let c = regime_comparison(&MirrorEnsemble::new(0.4, 5.0 * PI / 12.0).unwrap());
        assert_eq!(c.fidelity_regime, Regime::UpDown);
        assert!(!c.minerror_pom_maximizes_fidelity);
        assert!((c.max_fidelity - 0.9).abs() < 1e-12);
        assert!(c.max_fidelity - c.minerror_fidelity > 1e-3);

        let p = 1.0 / 3.0;
        let e = MirrorEnsemble::new(p, FRAC_PI_4).unwrap();
        let c = regime_comparison(&e);
        assert_eq!(c.fidelity_regime, Regime::LeftRight);
        assert!(c.minerror_pom_maximizes_fidelity);
    }

    #[test]
    fn bayes_never_worse_than_indexed() {
        let e = MirrorEnsemble::new(0.2, 0.6).unwrap();
        let r = min_error_strategy(&e);
        assert!(bayes_error_probability(&e, &r.pom) <= r.p_error + 1e-15);
        assert!((bayes_error_probability(&e, &r.pom) - r.p_error).abs() < 1e-12);
    }
}
