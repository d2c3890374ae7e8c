//! Qubit operators, pure states, the mirror-symmetric ensemble and
//! rank-1 POM elements.
//!
//! Amplitudes are written in the `{|+⟩, |−⟩}` basis, so `|+⟩ = (1, 0)` and
//! `|−⟩ = (0, 1)`. States are compared through their projectors; a global
//! phase is never observable.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::numeric::{hypot, stable_sum, wrap_pi};
use crate::{Error, Result, REPR_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 Hermitian operator `[[r, s], [s*, q]]`.
///
/// Hermiticity holds by construction; [`HermitianOp2::from_entries`] is the
/// checked entry point for arbitrary complex matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp2 {
    upper: f64,
    lower: f64,
    off: Complex64,
}

impl HermitianOp2 {
    pub const ZERO: Self = Self::real(0.0, 0.0, 0.0);
    pub const IDENTITY: Self = Self::real(1.0, 0.0, 1.0);

    /// Builds `[[upper, off], [conj(off), lower]]`.
    pub const fn new(upper: f64, off: Complex64, lower: f64) -> Self {
        Self { upper, lower, off }
    }

    /// Real symmetric `[[upper, off], [off, lower]]`.
    pub const fn real(upper: f64, off: f64, lower: f64) -> Self {
        Self::new(upper, Complex64::new(off, 0.0), lower)
    }

    /// Accepts a full complex matrix if it is Hermitian to within 1e−12.
    /// The stored operator is the Hermitian part.
    pub fn from_entries(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let asym = [
            m[0][0].im.abs(),
            m[1][1].im.abs(),
            (m[0][1] - m[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if !(asym <= REPR_TOL) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::new(
            m[0][0].re,
            (m[0][1] + m[1][0].conj()) * 0.5,
            m[1][1].re,
        ))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(state: &QubitState) -> Self {
        let (a, b) = (state.plus(), state.minus());
        Self::new(a.norm_sqr(), a * b.conj(), b.norm_sqr())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match (row, col) {
            (0, 0) => Complex64::new(self.upper, 0.0),
            (0, 1) => self.off,
            (1, 0) => self.off.conj(),
            (1, 1) => Complex64::new(self.lower, 0.0),
            _ => panic!("index ({row}, {col}) out of range for a 2×2 operator"),
        }
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [
            [self.entry(0, 0), self.entry(0, 1)],
            [self.entry(1, 0), self.entry(1, 1)],
        ]
    }

    /// `⟨+|M|+⟩`
    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// `⟨−|M|−⟩`
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// `⟨+|M|−⟩`
    pub fn off_diagonal(&self) -> Complex64 {
        self.off
    }

    pub fn trace(&self) -> f64 {
        self.upper + self.lower
    }

    pub fn determinant(&self) -> f64 {
        self.upper * self.lower - self.off.norm_sqr()
    }

    /// Closed-form eigenvalues `(λ₊, λ₋)` with `λ₊ ≥ λ₋`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.upper + self.lower);
        let radius = hypot(0.5 * (self.upper - self.lower), self.off.norm());
        (mean + radius, mean - radius)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.eigenvalues().1 >= -tol
    }

    /// `⟨ψ|M|ψ⟩`
    pub fn expectation(&self, state: &QubitState) -> f64 {
        let (a, b) = (state.plus(), state.minus());
        self.upper * a.norm_sqr() + self.lower * b.norm_sqr() + 2.0 * (a.conj() * self.off * b).re
    }

    /// `M|ψ⟩` as raw amplitudes.
    pub fn apply(&self, state: &QubitState) -> [Complex64; 2] {
        let (a, b) = (state.plus(), state.minus());
        [
            a * self.upper + self.off * b,
            self.off.conj() * a + b * self.lower,
        ]
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.abs().max(self.lower.abs()).max(self.off.norm())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.upper * self.upper + self.lower * self.lower + 2.0 * self.off.norm_sqr())
    }
}

impl Add for HermitianOp2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.upper + rhs.upper,
            self.off + rhs.off,
            self.lower + rhs.lower,
        )
    }
}

impl Sub for HermitianOp2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.upper - rhs.upper,
            self.off - rhs.off,
            self.lower - rhs.lower,
        )
    }
}

impl Mul<f64> for HermitianOp2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.upper * k, self.off * k, self.lower * k)
    }
}

impl core::iter::Sum for HermitianOp2 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, m| acc + m)
    }
}

/// A normalized pure qubit state `a|+⟩ + b|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    plus: Complex64,
    minus: Complex64,
}

impl QubitState {
    pub const PLUS: Self = Self {
        plus: ONE,
        minus: ZERO,
    };
    pub const MINUS: Self = Self {
        plus: ZERO,
        minus: ONE,
    };

    /// Checked constructor: `|a|² + |b|²` must be 1 to within 1e−12.
    pub fn new(plus: Complex64, minus: Complex64) -> Result<Self> {
        let n = plus.norm_sqr() + minus.norm_sqr();
        if !((n - 1.0).abs() <= REPR_TOL) {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { plus, minus })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(plus: Complex64, minus: Complex64) -> Result<Self> {
        let n = hypot(plus.norm(), minus.norm());
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self {
            plus: plus / n,
            minus: minus / n,
        })
    }

    /// `cos(angle)|+⟩ + sin(angle)|−⟩`
    pub fn real_angle(angle: f64) -> Self {
        Self {
            plus: Complex64::new(libm::cos(angle), 0.0),
            minus: Complex64::new(libm::sin(angle), 0.0),
        }
    }

    /// Normalized `|+⟩ + y|−⟩`.
    pub fn from_ratio(y: f64) -> Self {
        let n = hypot(1.0, y);
        Self {
            plus: Complex64::new(1.0 / n, 0.0),
            minus: Complex64::new(y / n, 0.0),
        }
    }

    pub fn plus(&self) -> Complex64 {
        self.plus
    }

    pub fn minus(&self) -> Complex64 {
        self.minus
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.plus.conj() * other.plus + self.minus.conj() * other.minus
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap_sq(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> HermitianOp2 {
        HermitianOp2::projector(self)
    }

    /// Same ray in Hilbert space, to within `tol` on `1 − |⟨a|b⟩|²`.
    pub fn same_ray(&self, other: &Self, tol: f64) -> bool {
        1.0 - self.overlap_sq(other) <= tol
    }
}

/// Mirror map: `|+⟩ → |+⟩`, `|−⟩ → −|−⟩`.
pub fn mirror_reflect(state: &QubitState) -> QubitState {
    QubitState {
        plus: state.plus,
        minus: -state.minus,
    }
}

/// One signal state with its prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signal {
    pub prior: f64,
    pub state: QubitState,
}

/// Anything that can present itself as a list of weighted pure signals.
pub trait Ensemble {
    fn signals(&self) -> &[Signal];

    /// `ρ_T = Σ_j p_j |ψ_j⟩⟨ψ_j|`
    fn average_state(&self) -> HermitianOp2 {
        self.signals()
            .iter()
            .map(|s| s.state.projector() * s.prior)
            .sum()
    }

    /// `Σ_j (1 − p_j) |ψ_j⟩⟨ψ_j|`
    fn antiweighted_sum(&self) -> HermitianOp2 {
        self.signals()
            .iter()
            .map(|s| s.state.projector() * (1.0 - s.prior))
            .sum()
    }
}

impl Ensemble for [Signal] {
    fn signals(&self) -> &[Signal] {
        self
    }
}

/// A general finite ensemble of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateList {
    signals: Vec<Signal>,
}

impl StateList {
    /// Priors must be nonnegative and sum to 1 within 1e−12.
    pub fn new(signals: Vec<Signal>) -> Result<Self> {
        for s in &signals {
            if !(s.prior >= 0.0 && s.prior <= 1.0) {
                return Err(Error::Domain {
                    name: "prior",
                    value: s.prior,
                    range: "[0, 1]",
                });
            }
        }
        let total = stable_sum(signals.iter().map(|s| s.prior));
        if !((total - 1.0).abs() <= REPR_TOL) {
            return Err(Error::Domain {
                name: "Σ priors",
                value: total,
                range: "{1}",
            });
        }
        Ok(Self { signals })
    }
}

impl Ensemble for StateList {
    fn signals(&self) -> &[Signal] {
        &self.signals
    }
}

/// Two mirror-image states `cosθ|+⟩ ± sinθ|−⟩` with prior `p` each, and
/// `|+⟩` with prior `1 − 2p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorEnsemble {
    p: f64,
    theta: f64,
    signals: [Signal; 3],
}

impl MirrorEnsemble {
    /// Requires `0 ≤ p ≤ ½` and `0 ≤ θ ≤ π/2` (radians).
    pub fn new(p: f64, theta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                range: "[0, 1/2]",
            });
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain {
                name: "theta",
                value: theta,
                range: "[0, π/2]",
            });
        }
        let psi1 = QubitState::real_angle(theta);
        let psi2 = mirror_reflect(&psi1);
        Ok(Self {
            p,
            theta,
            signals: [
                Signal {
                    prior: p,
                    state: psi1,
                },
                Signal {
                    prior: p,
                    state: psi2,
                },
                Signal {
                    prior: 1.0 - 2.0 * p,
                    state: QubitState::PLUS,
                },
            ],
        })
    }

    /// `p = ⅓`, `θ = π/3`: three equiprobable states 120° apart on the
    /// Bloch circle.
    pub fn trine() -> Self {
        Self::new(1.0 / 3.0, FRAC_PI_3).expect("trine parameters are in range")
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn states(&self) -> [QubitState; 3] {
        self.signals.map(|s| s.state)
    }

    pub fn priors(&self) -> [f64; 3] {
        self.signals.map(|s| s.prior)
    }
}

impl Ensemble for MirrorEnsemble {
    fn signals(&self) -> &[Signal] {
        &self.signals
    }
}

/// Same as [`MirrorEnsemble::new`].
pub fn make_mirror_ensemble(p: f64, theta: f64) -> Result<MirrorEnsemble> {
    MirrorEnsemble::new(p, theta)
}

/// A rank-1 POM element
/// `w · [[1 + cosθ_k, sinθ_k e^{iφ_k}], [sinθ_k e^{−iφ_k}, 1 − cosθ_k]]`.
///
/// The trace is `2w`, so a projector `|n⟩⟨n|` has `w = ½`. Angles are
/// canonicalized to `θ_k ∈ (−π, π]`, `φ_k ∈ (−π/2, π/2]`; a phase outside
/// that range is absorbed by flipping the sign of `θ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PomElement {
    w: f64,
    theta_k: f64,
    phi_k: f64,
    matrix: HermitianOp2,
}

impl PomElement {
    pub fn new(w: f64, theta_k: f64, phi_k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain {
                name: "w",
                value: w,
                range: "[0, 1]",
            });
        }
        for (name, v) in [("theta_k", theta_k), ("phi_k", phi_k)] {
            if !v.is_finite() {
                return Err(Error::Domain {
                    name,
                    value: v,
                    range: "finite",
                });
            }
        }
        let (theta_k, phi_k) = canonical_angles(theta_k, phi_k);
        let (s, c) = (libm::sin(theta_k), libm::cos(theta_k));
        let phase = Complex64::new(libm::cos(phi_k), libm::sin(phi_k));
        let matrix = HermitianOp2::new(w * (1.0 + c), phase * (w * s), w * (1.0 - c));
        Ok(Self {
            w,
            theta_k,
            phi_k,
            matrix,
        })
    }

    /// In-plane element (`φ_k = 0`).
    pub fn planar(w: f64, theta_k: f64) -> Result<Self> {
        Self::new(w, theta_k, 0.0)
    }

    /// `weight · |ψ⟩⟨ψ|` expressed in `(w, θ_k, φ_k)` form.
    pub fn from_weighted_projector(weight: f64, state: &QubitState) -> Result<Self> {
        let (a, b) = (state.plus(), state.minus());
        let cos_part = a.norm_sqr() - b.norm_sqr();
        let cross = a * b.conj() * 2.0;
        let theta_k = libm::atan2(cross.norm(), cos_part);
        let phi_k = if cross.norm() > 0.0 { cross.arg() } else { 0.0 };
        Self::new(0.5 * weight, theta_k, phi_k)
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn theta_k(&self) -> f64 {
        self.theta_k
    }

    pub fn phi_k(&self) -> f64 {
        self.phi_k
    }

    pub fn matrix(&self) -> &HermitianOp2 {
        &self.matrix
    }

    /// The pure state this element is proportional to.
    pub fn direction(&self) -> QubitState {
        let half = 0.5 * self.theta_k;
        let phase = Complex64::new(libm::cos(self.phi_k), -libm::sin(self.phi_k));
        QubitState {
            plus: Complex64::new(libm::cos(half), 0.0),
            minus: phase * libm::sin(half),
        }
    }

    /// The mirror image `(w, −θ_k, φ_k)`.
    pub fn reflected(&self) -> Self {
        Self::new(self.w, -self.theta_k, self.phi_k).expect("reflection keeps a valid element")
    }
}

fn canonical_angles(theta_k: f64, phi_k: f64) -> (f64, f64) {
    let mut phi = wrap_pi(phi_k);
    let mut theta = theta_k;
    if phi > FRAC_PI_2 {
        phi -= PI;
        theta = -theta;
    } else if phi <= -FRAC_PI_2 {
        phi += PI;
        theta = -theta;
    }
    (wrap_pi(theta), phi)
}

/// `⟨ψ|Π_k|ψ⟩`, clipped to `[0, 1]`.
pub fn outcome_probability(state: &QubitState, element: &PomElement) -> f64 {
    element.matrix.expectation(state).clamp(0.0, 1.0)
}

/// An ordered list of POM elements. Construction through
/// [`Pom::from_elements`] does not check completeness; use
/// [`Pom::validated`] or [`validate_pom`] for that.
#[derive(Debug, Clone, PartialEq)]
pub struct Pom {
    elements: Vec<PomElement>,
}

impl Pom {
    pub fn from_elements(elements: Vec<PomElement>) -> Self {
        Self { elements }
    }

    /// Builds the POM and rejects it unless [`validate_pom`] passes.
    pub fn validated(elements: Vec<PomElement>) -> Result<Self> {
        let pom = Self { elements };
        let report = validate_pom(&pom);
        if report.is_valid() {
            Ok(pom)
        } else {
            Err(Error::InvalidPom {
                completeness: report.completeness_residual,
                psd: report.worst_eigenvalue,
            })
        }
    }

    /// `{|+⟩⟨+|, |−⟩⟨−|}`
    pub fn up_down() -> Self {
        Self::from_elements(alloc::vec![
            PomElement::planar(0.5, 0.0).unwrap(),
            PomElement::planar(0.5, PI).unwrap(),
        ])
    }

    /// `{½(|+⟩ + |−⟩)(⟨+| + ⟨−|), ½(|+⟩ − |−⟩)(⟨+| − ⟨−|)}`
    pub fn left_right() -> Self {
        Self::from_elements(alloc::vec![
            PomElement::planar(0.5, FRAC_PI_2).unwrap(),
            PomElement::planar(0.5, -FRAC_PI_2).unwrap(),
        ])
    }

    pub fn elements(&self) -> &[PomElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, PomElement> {
        self.elements.iter()
    }

    pub fn operator_sum(&self) -> HermitianOp2 {
        let e = &self.elements;
        HermitianOp2::new(
            stable_sum(e.iter().map(|x| x.matrix.upper())),
            Complex64::new(
                stable_sum(e.iter().map(|x| x.matrix.off_diagonal().re)),
                stable_sum(e.iter().map(|x| x.matrix.off_diagonal().im)),
            ),
            stable_sum(e.iter().map(|x| x.matrix.lower())),
        )
    }

    /// Largest entrywise distance between two POMs with the same length.
    pub fn max_element_diff(&self, other: &Self) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.matrix.max_abs_diff(&b.matrix))
                .fold(0.0, f64::max)
        })
    }
}

impl<'a> IntoIterator for &'a Pom {
    type Item = &'a PomElement;
    type IntoIter = core::slice::Iter<'a, PomElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Outcome of [`validate_pom`].
#[derive(Debug, Clone, PartialEq)]
pub struct PomValidation {
    pub tolerance: f64,
    /// Smallest eigenvalue over all elements.
    pub worst_eigenvalue: f64,
    /// Largest `|det|` over all elements (rank-1 check).
    pub worst_determinant: f64,
    pub psd_ok: bool,
    /// `max |(Σ_k Π_k − 1)_{ij}|`
    pub completeness_residual: f64,
    pub completeness_ok: bool,
    /// `[|1 − Σw|, |Σ w cosθ|, |Σ w sinθ e^{iφ}|]`
    pub constraint_residuals: [f64; 3],
    pub constraints_ok: bool,
}

impl PomValidation {
    pub fn is_valid(&self) -> bool {
        self.psd_ok && self.completeness_ok
    }

    pub fn max_residual(&self) -> f64 {
        self.constraint_residuals
            .iter()
            .copied()
            .fold(self.completeness_residual, f64::max)
            .max((-self.worst_eigenvalue).max(0.0))
    }
}

/// Checks positivity, completeness and the three scalar constraints at the
/// representation tolerance (1e−12).
pub fn validate_pom(pom: &Pom) -> PomValidation {
    validate_pom_with_tol(pom, REPR_TOL)
}

pub fn validate_pom_with_tol(pom: &Pom, tol: f64) -> PomValidation {
    let worst_eigenvalue = pom
        .iter()
        .map(|e| e.matrix.eigenvalues().1)
        .fold(f64::INFINITY, f64::min);
    let worst_eigenvalue = if pom.is_empty() {
        0.0
    } else {
        worst_eigenvalue
    };
    let worst_determinant = pom
        .iter()
        .map(|e| e.matrix.determinant().abs())
        .fold(0.0, f64::max);
    let completeness_residual = pom.operator_sum().max_abs_diff(&HermitianOp2::IDENTITY);

    let weight = stable_sum(pom.iter().map(|e| e.w)) - 1.0;
    let balance = stable_sum(pom.iter().map(|e| e.w * libm::cos(e.theta_k)));
    let transverse = Complex64::new(
        stable_sum(
            pom.iter()
                .map(|e| e.w * libm::sin(e.theta_k) * libm::cos(e.phi_k)),
        ),
        stable_sum(
            pom.iter()
                .map(|e| e.w * libm::sin(e.theta_k) * libm::sin(e.phi_k)),
        ),
    );
    let constraint_residuals = [weight.abs(), balance.abs(), transverse.norm()];

    PomValidation {
        tolerance: tol,
        worst_eigenvalue,
        worst_determinant,
        psd_ok: worst_eigenvalue >= -tol && worst_determinant <= tol,
        completeness_residual,
        completeness_ok: completeness_residual <= tol,
        constraint_residuals,
        constraints_ok: constraint_residuals.iter().all(|r| *r <= tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ensemble_equal_orthogonal_pair() {
        let e = MirrorEnsemble::new(0.5, FRAC_PI_4).unwrap();
        let [s1, s2, s3] = e.states();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!(s1.same_ray(&QubitState::new(c(r), c(r)).unwrap(), 1e-15));
        assert!(s2.same_ray(&QubitState::new(c(r), c(-r)).unwrap(), 1e-15));
        assert!(s3.same_ray(&QubitState::PLUS, 0.0));
        assert_eq!(e.priors(), [0.5, 0.5, 0.0]);
    }

    #[test]
    fn ensemble_single_state() {
        let e = MirrorEnsemble::new(0.0, 0.3).unwrap();
        assert_eq!(e.priors(), [0.0, 0.0, 1.0]);
        assert!(
            e.average_state()
                .max_abs_diff(&QubitState::PLUS.projector())
                < 1e-15
        );
    }

    #[test]
    fn trine_priors_and_angles() {
        let e = MirrorEnsemble::trine();
        for prior in e.priors() {
            assert!((prior - 1.0 / 3.0).abs() < 1e-15);
        }
        let [s1, s2, s3] = e.states();
        // 120° on the Bloch circle ⇔ |⟨a|b⟩|² = cos²60° = ¼
        for (a, b) in [(s1, s2), (s1, s3), (s2, s3)] {
            assert!((a.overlap_sq(&b) - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn ensemble_rejects_out_of_range() {
        match MirrorEnsemble::new(0.6, 0.1) {
            Err(Error::Domain { name, .. }) => assert_eq!(name, "p"),
            other => panic!("unexpected {other:?}"),
        }
        match MirrorEnsemble::new(0.2, 2.0) {
            Err(Error::Domain { name, .. }) => assert_eq!(name, "theta"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(MirrorEnsemble::new(f64::NAN, 0.1).is_err());
        assert!(MirrorEnsemble::new(-1e-18, 0.1).is_err());
    }

    #[test]
    fn mirror_reflect_cases() {
        assert_eq!(mirror_reflect(&QubitState::PLUS), QubitState::PLUS);
        let minus = mirror_reflect(&QubitState::MINUS);
        assert_eq!(minus.minus(), c(-1.0));
        let t = 0.7;
        let r = mirror_reflect(&QubitState::real_angle(t));
        assert!(r.same_ray(&QubitState::real_angle(-t), 1e-15));
    }

    #[test]
    fn outcome_probability_examples() {
        let half_lr = PomElement::planar(0.5, FRAC_PI_2).unwrap();
        assert!((outcome_probability(&QubitState::PLUS, &half_lr) - 0.5).abs() < 1e-15);

        // w = 1 at θ_k = 0 is 2|+⟩⟨+|; ⟨+|·|+⟩ = 2 is clipped to 1.
        let doubled_plus = PomElement::planar(1.0, 0.0).unwrap();
        assert_eq!(outcome_probability(&QubitState::PLUS, &doubled_plus), 1.0);

        // ψ₁(π/4) against w = 1, θ_k = π, i.e. 2|−⟩⟨−|: 2·|⟨−|ψ₁⟩|² = 2·½.
        let psi1 = QubitState::real_angle(FRAC_PI_4);
        let el = PomElement::planar(1.0, PI).unwrap();
        let by_hand = 2.0 * psi1.minus().norm_sqr();
        let generic = matrix_sandwich(&el.matrix().entries(), &psi1);
        assert!((by_hand - 1.0).abs() < 1e-15);
        assert!((generic - by_hand).abs() < 1e-15);
        assert!((outcome_probability(&psi1, &el) - 1.0).abs() < 1e-15);

        // With the projector normalization (w = ½) the same direction gives ½.
        let proj = PomElement::planar(0.5, PI).unwrap();
        assert!((outcome_probability(&psi1, &proj) - 0.5).abs() < 1e-15);
    }

    fn matrix_sandwich(m: &[[Complex64; 2]; 2], s: &QubitState) -> f64 {
        let v = [s.plus(), s.minus()];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * m[i][j] * v[j];
            }
        }
        acc.re
    }

    #[test]
    fn validate_examples() {
        assert!(validate_pom(&Pom::up_down()).is_valid());
        assert!(validate_pom(&Pom::left_right()).is_valid());

        let lone = Pom::from_elements(alloc::vec![PomElement::planar(0.5, FRAC_PI_2).unwrap()]);
        let report = validate_pom(&lone);
        assert!(!report.is_valid());
        assert!(report.psd_ok);
        assert!((report.completeness_residual - 0.5).abs() < 1e-15);
        assert!(Pom::validated(lone.elements().to_vec()).is_err());
    }

    #[test]
    fn element_matrix_is_rank_one_psd() {
        let el = PomElement::new(0.37, 1.1, 0.4).unwrap();
        let (hi, lo) = el.matrix().eigenvalues();
        assert!(lo.abs() < 1e-15);
        assert!((hi - 2.0 * 0.37).abs() < 1e-15);
        assert!(el.matrix().determinant().abs() < 1e-15);
        let d = el.direction();
        assert!(el.matrix().max_abs_diff(&(d.projector() * 0.74)) < 1e-15);
    }

    #[test]
    fn phase_outside_range_is_absorbed() {
        let raw = PomElement::new(0.3, 0.8, 2.5).unwrap();
        assert!(raw.phi_k() > -FRAC_PI_2 && raw.phi_k() <= FRAC_PI_2);
        let s = libm::sin(0.8) * 0.3;
        let expected = Complex64::new(libm::cos(2.5), libm::sin(2.5)) * s;
        assert!((raw.matrix().off_diagonal() - expected).norm() < 1e-15);
    }

    #[test]
    fn weighted_projector_round_trip() {
        let s =
            QubitState::normalized(Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.7)).unwrap();
        let el = PomElement::from_weighted_projector(0.8, &s).unwrap();
        assert!(el.matrix().max_abs_diff(&(s.projector() * 0.8)) < 1e-15);
        assert!(el.direction().same_ray(&s, 1e-14));
    }

    #[test]
    fn hermitian_check() {
        let bad = [
            [c(1.0), Complex64::new(0.0, 1.0)],
            [Complex64::new(0.0, 1.0), c(0.0)],
        ];
        assert!(matches!(
            HermitianOp2::from_entries(bad),
            Err(Error::NotHermitian(_))
        ));
        let good = [
            [c(1.0), Complex64::new(0.2, 1.0)],
            [Complex64::new(0.2, -1.0), c(0.0)],
        ];
        let m = HermitianOp2::from_entries(good).unwrap();
        assert_eq!(m.entries(), good);
    }

    #[test]
    fn average_and_antiweighted_sums() {
        let e = MirrorEnsemble::new(0.5, FRAC_PI_4).unwrap();
        let half = HermitianOp2::IDENTITY * 0.5;
        assert!(e.average_state().max_abs_diff(&half) < 1e-15);
        // ½(|ψ₁⟩⟨ψ₁| + |ψ₂⟩⟨ψ₂|) + |+⟩⟨+|
        assert!(
            e.antiweighted_sum()
                .max_abs_diff(&HermitianOp2::real(1.5, 0.0, 0.5))
                < 1e-15
        );

        let t = MirrorEnsemble::trine();
        assert!(t.average_state().max_abs_diff(&half) < 1e-15);
        assert!(t.antiweighted_sum().max_abs_diff(&HermitianOp2::IDENTITY) < 1e-12);

        // p = 0: only |+⟩ has (1 − p_j) = 0; the mirror pair contributes fully.
        let th = 0.4;
        let z = MirrorEnsemble::new(0.0, th).unwrap();
        let (cs, sn) = (libm::cos(th), libm::sin(th));
        let expect = HermitianOp2::real(2.0 * cs * cs, 0.0, 2.0 * sn * sn);
        assert!(z.antiweighted_sum().max_abs_diff(&expect) < 1e-15);
        assert!(z.antiweighted_sum().max_abs_diff(&HermitianOp2::IDENTITY) > 0.1);
    }

    #[test]
    fn state_list_checks_priors() {
        let s = Signal {
            prior: 0.5,
            state: QubitState::PLUS,
        };
        assert!(StateList::new(alloc::vec![s, s]).is_ok());
        assert!(StateList::new(alloc::vec![s]).is_err());
    }

    #[test]
    fn non_normalized_state_rejected() {
        assert!(QubitState::new(c(1.0), c(0.1)).is_err());
        assert!(QubitState::normalized(c(0.0), c(0.0)).is_err());
    }
}
