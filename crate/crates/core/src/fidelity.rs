//! Fidelity of measure-and-retransmit strategies.
//!
//! For a POM `{Π_k}` and retransmission states `{|φ_k⟩}` the fidelity is
//! `F = Σ_k ⟨φ_k|O_k|φ_k⟩` with `O_k = Σ_j p_j |ψ_j⟩⟨ψ_j|Π_k|ψ_j⟩⟨ψ_j|`.
//! The best retransmission for outcome `k` is the top eigenvector of `O_k`,
//! and then `F = Σ_k ν_{k+}`.
//!
//! The generic sum over signals is the implementation; the mirror-ensemble
//! closed forms ([`o_operator_closed_form`], [`nu_plus_closed_form`],
//! [`planar_fidelity`]) are independent checks on it.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numeric::{hypot, stable_sum};
use crate::qubit::{
    validate_pom, Ensemble, HermitianOp2, MirrorEnsemble, Pom, PomElement, QubitState,
};
use crate::{Error, Result, CROSS_TOL};

/// Eigen-decomposition of a 2×2 Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair2 {
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub vec_plus: QubitState,
    pub vec_minus: QubitState,
    /// Spectrum is degenerate to within 1e−12 of the trace; `vec_plus` is
    /// then `|+⟩` by convention.
    pub degenerate: bool,
}

/// Retransmission state per POM element, in POM order.
#[derive(Debug, Clone, PartialEq)]
pub struct RetransmitMap {
    pub states: Vec<QubitState>,
}

impl RetransmitMap {
    pub fn new(states: Vec<QubitState>) -> Self {
        Self { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `O_k = Σ_j p_j ⟨ψ_j|Π_k|ψ_j⟩ |ψ_j⟩⟨ψ_j|`
pub fn o_operator<E: Ensemble + ?Sized>(ensemble: &E, element: &PomElement) -> HermitianOp2 {
    let terms: Vec<HermitianOp2> = ensemble
        .signals()
        .iter()
        .map(|s| s.state.projector() * (s.prior * element.matrix().expectation(&s.state)))
        .collect();
    HermitianOp2::new(
        stable_sum(terms.iter().map(|t| t.upper())),
        Complex64::new(
            stable_sum(terms.iter().map(|t| t.off_diagonal().re)),
            stable_sum(terms.iter().map(|t| t.off_diagonal().im)),
        ),
        stable_sum(terms.iter().map(|t| t.lower())),
    )
}

/// Explicit `O_k` matrix for the mirror ensemble.
pub fn o_operator_closed_form(e: &MirrorEnsemble, element: &PomElement) -> HermitianOp2 {
    let (p, th) = (e.p(), e.theta());
    let (w, tk, pk) = (element.w(), element.theta_k(), element.phi_k());
    let cos2 = libm::cos(2.0 * th);
    let sin2 = libm::sin(2.0 * th);
    let (c, s) = (libm::cos(th), libm::sin(th));
    let ck = libm::cos(tk);
    let common = 1.0 + cos2 * ck;
    HermitianOp2::real(
        w * (2.0 * p * c * c * common + (1.0 - 2.0 * p) * (1.0 + ck)),
        w * p * sin2 * sin2 * libm::sin(tk) * libm::cos(pk),
        w * 2.0 * p * s * s * common,
    )
}

/// Larger eigenvalue of `O_k` for the mirror ensemble, from its explicit
/// trace/discriminant form.
pub fn nu_plus_closed_form(e: &MirrorEnsemble, element: &PomElement) -> f64 {
    let (p, th) = (e.p(), e.theta());
    let (w, tk, pk) = (element.w(), element.theta_k(), element.phi_k());
    let cos2 = libm::cos(2.0 * th);
    let sin2 = libm::sin(2.0 * th);
    let ck = libm::cos(tk);
    let half_trace = p * (1.0 + cos2 * ck) + (0.5 - p) * (1.0 + ck);
    let half_split = p * cos2 * (1.0 + cos2 * ck) + (0.5 - p) * (1.0 + ck);
    let coupling = p * sin2 * sin2 * libm::sin(tk) * libm::cos(pk);
    w * (half_trace + hypot(half_split, coupling))
}

/// Closed-form 2×2 eigen-decomposition.
///
/// For a nonzero off-diagonal `S` the top eigenvector is `(1, Y₊)` with
/// `Y₊ = (P − R)/(2S) + √((P − R)² + 4|S|²)/(2S)`; whichever root does not
/// cancel is computed directly and the other follows from `Y₊·Y₋ = −1`.
pub fn eigen_decompose(m: &HermitianOp2) -> EigenPair2 {
    let (nu_plus, nu_minus) = m.eigenvalues();
    let trace = m.trace();
    if nu_plus - nu_minus <= 1e-12 * trace.abs() {
        return EigenPair2 {
            nu_plus,
            nu_minus,
            vec_plus: QubitState::PLUS,
            vec_minus: QubitState::MINUS,
            degenerate: true,
        };
    }

    let (r, q, s) = (m.upper(), m.lower(), m.off_diagonal());
    let s_abs = s.norm();
    let diagonal = |upper_wins: bool| {
        let (hi, lo) = if upper_wins {
            (QubitState::PLUS, QubitState::MINUS)
        } else {
            (QubitState::MINUS, QubitState::PLUS)
        };
        EigenPair2 {
            nu_plus,
            nu_minus,
            vec_plus: hi,
            vec_minus: lo,
            degenerate: false,
        }
    };
    if s_abs == 0.0 {
        return diagonal(r >= q);
    }

    let d = q - r;
    let root = hypot(d, 2.0 * s_abs);
    let y_plus = if d >= 0.0 {
        (d + root) / (2.0 * s_abs)
    } else {
        let y_minus = (d - root) / (2.0 * s_abs);
        -1.0 / y_minus
    };
    if !y_plus.is_finite() {
        return diagonal(r >= q);
    }
    // (1, Y) with complex S picks up the phase conj(S)/|S|.
    let phase = s.conj() / s_abs;
    let y = phase * y_plus;
    let n = hypot(1.0, y_plus);
    let vec_plus = QubitState::new(Complex64::new(1.0 / n, 0.0), y / n)
        .expect("(1, Y)/|(1, Y)| has unit norm");
    let vec_minus = QubitState::new(-y.conj() / n, Complex64::new(1.0 / n, 0.0))
        .expect("orthogonal complement has unit norm");
    EigenPair2 {
        nu_plus,
        nu_minus,
        vec_plus,
        vec_minus,
        degenerate: false,
    }
}

/// Top eigenvector of `O_k`: the best state to send on outcome `k`.
pub fn optimal_retransmission<E: Ensemble + ?Sized>(
    ensemble: &E,
    element: &PomElement,
) -> Result<QubitState> {
    let o = o_operator(ensemble, element);
    if o.max_abs() == 0.0 {
        return Err(Error::NoPreferredState);
    }
    Ok(eigen_decompose(&o).vec_plus)
}

/// `η = (2p·cos2θ + 1 − 2p) / (2p·sin²2θ)`
pub fn eta(e: &MirrorEnsemble) -> Result<f64> {
    let p = e.p();
    let sin2 = libm::sin(2.0 * e.theta());
    let denom = 2.0 * p * sin2 * sin2;
    if denom == 0.0 {
        return Err(Error::EtaUndefined);
    }
    Ok((2.0 * p * libm::cos(2.0 * e.theta()) + 1.0 - 2.0 * p) / denom)
}

/// `η` written through the average state:
/// `(⟨+|ρ_T|+⟩ − ⟨−|ρ_T|−⟩) / (2p·sin²2θ)`.
pub fn eta_from_average_state(e: &MirrorEnsemble) -> Result<f64> {
    let sin2 = libm::sin(2.0 * e.theta());
    let denom = 2.0 * e.p() * sin2 * sin2;
    if denom == 0.0 {
        return Err(Error::EtaUndefined);
    }
    let rho = e.average_state();
    Ok((rho.upper() - rho.lower()) / denom)
}

/// `√(η² + 1) − η`, evaluated without cancellation.
pub fn shift_ratio(eta: f64) -> f64 {
    let h = hypot(eta, 1.0);
    if eta >= 0.0 {
        1.0 / (h + eta)
    } else {
        h - eta
    }
}

/// Retransmission state for the `θ_k = ±π/2` element (`sign` = ±1):
/// `|+⟩ + Y|−⟩` normalized, `Y = ±(√(η² + 1) − η)`.
///
/// Returns `(η, Y, state)`.
pub fn left_right_retransmission(e: &MirrorEnsemble, sign: f64) -> Result<(f64, f64, QubitState)> {
    let eta = eta(e)?;
    let y = sign.signum() * shift_ratio(eta);
    Ok((eta, y, QubitState::from_ratio(y)))
}

/// `F = Σ_{j,k} p_j |⟨ψ_j|φ_k⟩|² ⟨ψ_j|Π_k|ψ_j⟩`
pub fn strategy_fidelity<E: Ensemble + ?Sized>(
    ensemble: &E,
    pom: &Pom,
    retrans: &RetransmitMap,
) -> Result<f64> {
    let report = validate_pom(pom);
    if !report.is_valid() {
        return Err(Error::InvalidPom {
            completeness: report.completeness_residual,
            psd: report.worst_eigenvalue,
        });
    }
    if retrans.len() != pom.len() {
        return Err(Error::LengthMismatch {
            expected: pom.len(),
            got: retrans.len(),
        });
    }
    let terms = ensemble.signals().iter().flat_map(|s| {
        pom.iter().zip(&retrans.states).map(move |(el, phi)| {
            s.prior * s.state.overlap_sq(phi) * el.matrix().expectation(&s.state)
        })
    });
    Ok(stable_sum(terms))
}

/// `F = Σ_k ν_{k+}` together with the eigenvectors that attain it.
pub fn best_fidelity_for_pom<E: Ensemble + ?Sized>(
    ensemble: &E,
    pom: &Pom,
) -> (f64, RetransmitMap) {
    let pairs: Vec<EigenPair2> = pom
        .iter()
        .map(|el| eigen_decompose(&o_operator(ensemble, el)))
        .collect();
    let f = stable_sum(pairs.iter().map(|ep| ep.nu_plus));
    (
        f,
        RetransmitMap::new(pairs.into_iter().map(|ep| ep.vec_plus).collect()),
    )
}

/// A mirror-symmetric pair of in-plane elements at `±θ_k` with combined
/// weight `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPair {
    pub w: f64,
    pub theta_k: f64,
}

impl PlanarPair {
    pub fn new(w: f64, theta_k: f64) -> Self {
        Self { w, theta_k }
    }

    /// Pair at `θ_k = acos(cos_theta)` (clamped to `[−1, 1]`).
    pub fn from_cos(w: f64, cos_theta: f64) -> Self {
        Self::new(w, libm::acos(cos_theta.clamp(-1.0, 1.0)))
    }
}

/// `Q_k` as a function of `cosθ_k`.
pub fn q_function(e: &MirrorEnsemble, cos_theta_k: f64) -> f64 {
    let (p, th) = (e.p(), e.theta());
    let cos2 = libm::cos(2.0 * th);
    let sin2 = libm::sin(2.0 * th);
    let ck = cos_theta_k;
    let lin = p * cos2 * (1.0 + cos2 * ck) + (0.5 - p) * (1.0 + ck);
    lin * lin + p * p * sin2 * sin2 * sin2 * sin2 * (1.0 - ck * ck)
}

/// Residuals `(Σw − 1, Σ w cosθ_k)` of the in-plane constraints.
pub fn planar_residuals(pairs: &[PlanarPair]) -> (f64, f64) {
    (
        stable_sum(pairs.iter().map(|pp| pp.w)) - 1.0,
        stable_sum(pairs.iter().map(|pp| pp.w * libm::cos(pp.theta_k))),
    )
}

/// `F = ½ + Σ_k w_k √Q_k` for in-plane mirror-paired POMs.
pub fn planar_fidelity(e: &MirrorEnsemble, pairs: &[PlanarPair]) -> Result<f64> {
    let (weight, balance) = planar_residuals(pairs);
    let negative = pairs.iter().any(|pp| !(pp.w >= 0.0));
    if negative || !(weight.abs() <= CROSS_TOL && balance.abs() <= CROSS_TOL) {
        return Err(Error::PlanarConstraint { weight, balance });
    }
    Ok(0.5 + planar_excess(e, pairs))
}

/// `Σ_k w_k √Q_k` without the constraint check.
pub(crate) fn planar_excess(e: &MirrorEnsemble, pairs: &[PlanarPair]) -> f64 {
    stable_sum(
        pairs
            .iter()
            .map(|pp| pp.w * libm::sqrt(q_function(e, libm::cos(pp.theta_k)))),
    )
}

/// Expands pairs into POM elements `(w/2, +θ_k)`, `(w/2, −θ_k)`.
///
/// Pairs at `θ_k ∈ {0, π}` are their own mirror image and become a single
/// element of weight `w`; zero-weight pairs are dropped.
pub fn expand_planar(pairs: &[PlanarPair]) -> Result<Pom> {
    let mut elements = Vec::with_capacity(2 * pairs.len());
    for pp in pairs.iter().filter(|pp| pp.w != 0.0) {
        let t = pp.theta_k;
        if t == 0.0 || t.abs() == core::f64::consts::PI {
            elements.push(PomElement::planar(pp.w, t)?);
        } else {
            elements.push(PomElement::planar(0.5 * pp.w, t)?);
            elements.push(PomElement::planar(0.5 * pp.w, -t)?);
        }
    }
    Ok(Pom::from_elements(elements))
}
