//! Independent checks on the closed-form optimum.
//!
//! - [`family_scan`] sweeps both three-element in-plane families (which
//!   contain the two-element POMs at their end points) and refines the best
//!   grid point by golden-section search.
//! - [`random_planar_search`] runs projected coordinate ascent over POMs of
//!   two to four mirror pairs from seeded random starts.
//! - [`monte_carlo_fidelity`] simulates intercept-resend trials.
//!
//! All randomness comes from ChaCha8 streams keyed by `(seed, index)`, where
//! the index is a restart or a block of trials. Work items are evaluated
//! through an [`IndexMap`], so a parallel mapper gives bit-identical results
//! to [`Sequential`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fidelity::{expand_planar, planar_excess, PlanarPair, RetransmitMap};
use crate::numeric::golden_max;
use crate::qubit::{validate_pom, Ensemble, MirrorEnsemble, Pom};
use crate::{Error, Result};

/// Evaluates `f(0), …, f(n − 1)` and returns the results in index order.
pub trait IndexMap {
    fn map_indices<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Plain in-order evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl IndexMap for Sequential {
    fn map_indices<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Golden-section iteration cap.
pub const GOLDEN_MAX_ITER: usize = 200;
/// Golden-section tolerance on `cosΩ`.
pub const GOLDEN_TOL: f64 = 1e-10;
/// Coordinate-ascent evaluation cap per restart.
pub const ASCENT_MAX_STEPS: usize = 10_000;
/// Trials per Monte Carlo block (one RNG stream each).
pub const MC_BLOCK: u64 = 1 << 16;

const ASCENT_MIN_STEP: f64 = 1e-12;
const DRAW_ATTEMPTS: usize = 100;

/// Which axis element accompanies the `±Ω` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyCase {
    /// `θ_k ∈ {π, ±Ω}`, `cosΩ ∈ [0, 1]`.
    WithPi,
    /// `θ_k ∈ {0, ±Ω}`, `cosΩ ∈ [−1, 0]`.
    WithZero,
}

/// One member of a three-element family; the constraints fix the weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeElementFamily {
    pub case: FamilyCase,
    pub cos_omega: f64,
}

impl ThreeElementFamily {
    pub fn new(case: FamilyCase, cos_omega: f64) -> Result<Self> {
        let ok = match case {
            FamilyCase::WithPi => (0.0..=1.0).contains(&cos_omega),
            FamilyCase::WithZero => (-1.0..=0.0).contains(&cos_omega),
        };
        if !ok {
            return Err(Error::Domain {
                name: "cos_omega",
                value: cos_omega,
                range: match case {
                    FamilyCase::WithPi => "[0, 1]",
                    FamilyCase::WithZero => "[-1, 0]",
                },
            });
        }
        Ok(Self { case, cos_omega })
    }

    /// `(w_Ω, w_axis)`.
    pub fn weights(&self) -> (f64, f64) {
        let c = self.cos_omega;
        match self.case {
            FamilyCase::WithPi => (1.0 / (1.0 + c), c / (1.0 + c)),
            FamilyCase::WithZero => (1.0 / (1.0 - c), -c / (1.0 - c)),
        }
    }

    pub fn pairs(&self) -> [PlanarPair; 2] {
        let (w_omega, w_axis) = self.weights();
        let axis = match self.case {
            FamilyCase::WithPi => PI,
            FamilyCase::WithZero => 0.0,
        };
        [
            PlanarPair::from_cos(w_omega, self.cos_omega),
            PlanarPair::new(w_axis, axis),
        ]
    }

    pub fn pom(&self) -> Pom {
        expand_planar(&self.pairs()).expect("family weights lie in [0, 1]")
    }

    pub fn fidelity(&self, e: &MirrorEnsemble) -> f64 {
        0.5 + planar_excess(e, &self.pairs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    FamilyScan,
    RandomSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_fidelity: f64,
    pub best_pom: Pom,
    pub best_pairs: Vec<PlanarPair>,
    pub method: OracleMethod,
    pub evaluations: usize,
    /// Every restart (or the refinement) finished within its iteration cap.
    pub converged: bool,
    /// Family member at the optimum (family scan only).
    pub best_family: Option<ThreeElementFamily>,
    /// Restarts that reached the best value with pairwise different POMs
    /// (random search only; 1 for the family scan).
    pub distinct_optima: usize,
    /// Smallest value seen on the scan grid (family scan only).
    pub worst_grid_fidelity: Option<f64>,
}

/// Grid members of both families, ordered by `cosΩ` then case. This order
/// is the tie-break: the first of several equal maxima wins.
pub fn family_grid(resolution: usize) -> Vec<ThreeElementFamily> {
    let step = 1.0 / (resolution - 1) as f64;
    let mut grid: Vec<ThreeElementFamily> = (0..resolution)
        .flat_map(|i| {
            let c = i as f64 * step;
            let pi_c = if i + 1 == resolution { 1.0 } else { c };
            let zero_c = if i + 1 == resolution { -1.0 } else { -c };
            [
                ThreeElementFamily {
                    case: FamilyCase::WithPi,
                    cos_omega: pi_c,
                },
                ThreeElementFamily {
                    case: FamilyCase::WithZero,
                    cos_omega: zero_c,
                },
            ]
        })
        .collect();
    grid.sort_by(|a, b| {
        a.cos_omega
            .total_cmp(&b.cos_omega)
            .then(a.case.cmp(&b.case))
    });
    grid
}

/// Scans both families on `resolution` points each and refines the best.
pub fn family_scan(e: &MirrorEnsemble, resolution: usize) -> Result<OracleResult> {
    family_scan_with(e, resolution, &Sequential)
}

pub fn family_scan_with<M: IndexMap>(
    e: &MirrorEnsemble,
    resolution: usize,
    mapper: &M,
) -> Result<OracleResult> {
    if resolution < 2 {
        return Err(Error::Domain {
            name: "resolution",
            value: resolution as f64,
            range: ">= 2",
        });
    }
    let grid = family_grid(resolution);
    let values = mapper.map_indices(grid.len(), |i| grid[i].fidelity(e));

    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let worst = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best_family = grid[best];
    let mut best_fidelity = values[best];

    // Golden-section refinement within the neighbouring grid cells.
    let step = 1.0 / (resolution - 1) as f64;
    let (dom_lo, dom_hi) = match best_family.case {
        FamilyCase::WithPi => (0.0, 1.0),
        FamilyCase::WithZero => (-1.0, 0.0),
    };
    let lo = (best_family.cos_omega - step).max(dom_lo);
    let hi = (best_family.cos_omega + step).min(dom_hi);
    let case = best_family.case;
    let objective = |c: f64| ThreeElementFamily { case, cos_omega: c }.fidelity(e);
    let (c_ref, f_ref, evals) = golden_max(objective, lo, hi, GOLDEN_TOL, GOLDEN_MAX_ITER);
    if f_ref > best_fidelity {
        best_fidelity = f_ref;
        best_family = ThreeElementFamily {
            case,
            cos_omega: c_ref,
        };
    }

    Ok(OracleResult {
        best_fidelity,
        best_pom: best_family.pom(),
        best_pairs: best_family.pairs().to_vec(),
        method: OracleMethod::FamilyScan,
        evaluations: grid.len() + evals,
        converged: evals < GOLDEN_MAX_ITER + 3,
        best_family: Some(best_family),
        distinct_optima: 1,
        worst_grid_fidelity: Some(worst),
    })
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rescales weights so that `Σ w cosθ = 0` and `Σ w = 1`. Works in
/// `(w, cosθ)` coordinates. `None` if the directions cannot be balanced.
fn repair(state: &mut [(f64, f64)]) -> Option<()> {
    let pos: f64 = state.iter().filter(|s| s.1 > 0.0).map(|s| s.0 * s.1).sum();
    let neg: f64 = state.iter().filter(|s| s.1 < 0.0).map(|s| s.0 * s.1).sum();
    let balance = pos + neg;
    if balance > 0.0 {
        if !(neg < 0.0) {
            return None;
        }
        let t = -neg / pos;
        state
            .iter_mut()
            .filter(|s| s.1 > 0.0)
            .for_each(|s| s.0 *= t);
    } else if balance < 0.0 {
        if !(pos > 0.0) {
            return None;
        }
        let t = -pos / neg;
        state
            .iter_mut()
            .filter(|s| s.1 < 0.0)
            .for_each(|s| s.0 *= t);
    }
    let total: f64 = state.iter().map(|s| s.0).sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    state.iter_mut().for_each(|s| s.0 /= total);
    Some(())
}

fn to_pairs(state: &[(f64, f64)]) -> Vec<PlanarPair> {
    state
        .iter()
        .map(|&(w, c)| PlanarPair::from_cos(w, c))
        .collect()
}

fn draw_state<R: Rng>(rng: &mut R, n_pairs: usize) -> Result<Vec<(f64, f64)>> {
    if n_pairs == 0 {
        return Err(Error::Domain {
            name: "n_pairs",
            value: 0.0,
            range: ">= 1",
        });
    }
    if n_pairs == 1 {
        // Σw = 1 and w·cosθ = 0 leave only θ = ±π/2.
        return Ok(alloc::vec![(1.0, 0.0)]);
    }
    for _ in 0..DRAW_ATTEMPTS {
        let mut state: Vec<(f64, f64)> = (0..n_pairs)
            .map(|_| {
                let w = 1.0 - rng.random::<f64>();
                let c = 2.0 * rng.random::<f64>() - 1.0;
                (w, c)
            })
            .collect();
        if repair(&mut state).is_some() {
            return Ok(state);
        }
    }
    Err(Error::Infeasible(DRAW_ATTEMPTS))
}

/// Random in-plane mirror pairs satisfying the weight constraints.
pub fn random_planar_pairs<R: Rng>(rng: &mut R, n_pairs: usize) -> Result<Vec<PlanarPair>> {
    draw_state(rng, n_pairs).map(|s| to_pairs(&s))
}

/// A random valid in-plane mirror-symmetric POM with `n_pairs` pairs.
pub fn random_planar_pom(n_pairs: usize, seed: u64) -> Result<Pom> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pom = expand_planar(&random_planar_pairs(&mut rng, n_pairs)?)?;
    let report = validate_pom(&pom);
    if !report.is_valid() {
        return Err(Error::InvalidPom {
            completeness: report.completeness_residual,
            psd: report.worst_eigenvalue,
        });
    }
    Ok(pom)
}

/// Outcome of one coordinate-ascent restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub fidelity: f64,
    /// `(w, cosθ)` per pair.
    pub state: Vec<(f64, f64)>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Projected coordinate ascent from one seeded random start.
pub fn search_restart(e: &MirrorEnsemble, seed: u64, restart: u64) -> Result<RestartOutcome> {
    let mut rng = stream_rng(seed, restart);
    let n_pairs = rng.random_range(2..=4usize);
    let mut state = draw_state(&mut rng, n_pairs)?;
    let objective = |s: &[(f64, f64)]| planar_excess(e, &to_pairs(s));

    let mut current = objective(&state);
    let mut evaluations = 1;
    let mut step = 0.25;
    let mut converged = false;
    while evaluations < ASCENT_MAX_STEPS {
        let before = current;
        for i in 0..state.len() {
            for coord in 0..2 {
                for dir in [1.0, -1.0] {
                    let mut cand = state.clone();
                    if coord == 0 {
                        cand[i].0 = (cand[i].0 + dir * step).max(0.0);
                    } else {
                        cand[i].1 = (cand[i].1 + dir * step).clamp(-1.0, 1.0);
                    }
                    if cand == state || repair(&mut cand).is_none() {
                        continue;
                    }
                    let f = objective(&cand);
                    evaluations += 1;
                    if f > current {
                        current = f;
                        state = cand;
                    }
                }
            }
        }
        let gain = current - before;
        if gain <= 1e-12 * current.abs() {
            step *= 0.5;
            if step < ASCENT_MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    Ok(RestartOutcome {
        fidelity: 0.5 + current,
        state,
        evaluations,
        converged,
    })
}

fn same_configuration(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    let canon = |s: &[(f64, f64)]| {
        let mut v: Vec<(f64, f64)> = s.iter().copied().filter(|x| x.0 > tol).collect();
        v.sort_by(|x, y| x.1.total_cmp(&y.1));
        v
    };
    let (a, b) = (canon(a), canon(b));
    a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
}

/// Best of `restarts` coordinate-ascent runs.
pub fn random_planar_search(
    e: &MirrorEnsemble,
    restarts: usize,
    seed: u64,
) -> Result<OracleResult> {
    random_planar_search_with(e, restarts, seed, &Sequential)
}

pub fn random_planar_search_with<M: IndexMap>(
    e: &MirrorEnsemble,
    restarts: usize,
    seed: u64,
    mapper: &M,
) -> Result<OracleResult> {
    if restarts == 0 {
        return Err(Error::Domain {
            name: "restarts",
            value: 0.0,
            range: ">= 1",
        });
    }
    let outcomes = mapper
        .map_indices(restarts, |r| search_restart(e, seed, r as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.fidelity > outcomes[best].fidelity {
            best = i;
        }
    }
    let top = outcomes[best].fidelity;
    let mut optima: Vec<&[(f64, f64)]> = Vec::new();
    for o in outcomes.iter().filter(|o| top - o.fidelity <= 1e-7) {
        if !optima.iter().any(|s| same_configuration(s, &o.state, 1e-6)) {
            optima.push(&o.state);
        }
    }
    let best_pairs = to_pairs(&outcomes[best].state);
    Ok(OracleResult {
        best_fidelity: top,
        best_pom: expand_planar(&best_pairs)?,
        best_pairs,
        method: OracleMethod::RandomSearch,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        converged: outcomes.iter().all(|o| o.converged),
        best_family: None,
        distinct_optima: optima.len(),
        worst_grid_fidelity: None,
    })
}

/// Monte Carlo fidelity estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub passes: u64,
}

struct TrialTables {
    prior_cdf: Vec<f64>,
    /// Outcome CDF per signal.
    outcome_cdf: Vec<Vec<f64>>,
    /// `|⟨ψ_j|φ_k⟩|²`
    pass: Vec<Vec<f64>>,
}

fn cdf(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let w: Vec<f64> = weights.map(|x| x.max(0.0)).collect();
    let total: f64 = w.iter().sum();
    let mut acc = 0.0;
    w.iter()
        .map(|x| {
            acc += x / total;
            acc
        })
        .collect()
}

fn sample(cdf: &[f64], u: f64) -> usize {
    cdf.iter()
        .position(|&c| u < c)
        .unwrap_or_else(|| cdf.iter().rposition(|_| true).unwrap_or(0))
}

fn run_block(t: &TrialTables, seed: u64, block: u64, trials: u64) -> u64 {
    let mut rng = stream_rng(seed, block);
    let mut passes = 0;
    for _ in 0..trials {
        let j = sample(&t.prior_cdf, rng.random::<f64>());
        let k = sample(&t.outcome_cdf[j], rng.random::<f64>());
        if rng.random::<f64>() < t.pass[j][k] {
            passes += 1;
        }
    }
    passes
}

/// Simulates intercept-resend: draw `j ~ p_j`, draw outcome `k` with
/// probability `⟨ψ_j|Π_k|ψ_j⟩`, pass with probability `|⟨ψ_j|φ_k⟩|²`.
pub fn monte_carlo_fidelity<E: Ensemble + ?Sized>(
    ensemble: &E,
    pom: &Pom,
    retrans: &RetransmitMap,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    monte_carlo_fidelity_with(ensemble, pom, retrans, trials, seed, &Sequential)
}

pub fn monte_carlo_fidelity_with<E: Ensemble + ?Sized, M: IndexMap>(
    ensemble: &E,
    pom: &Pom,
    retrans: &RetransmitMap,
    trials: u64,
    seed: u64,
    mapper: &M,
) -> Result<McEstimate> {
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
    if trials == 0 {
        return Err(Error::Domain {
            name: "trials",
            value: 0.0,
            range: ">= 1",
        });
    }
    let signals = ensemble.signals();
    let tables = TrialTables {
        prior_cdf: cdf(signals.iter().map(|s| s.prior)),
        outcome_cdf: signals
            .iter()
            .map(|s| cdf(pom.iter().map(|el| el.matrix().expectation(&s.state))))
            .collect(),
        pass: signals
            .iter()
            .map(|s| {
                retrans
                    .states
                    .iter()
                    .map(|phi| s.state.overlap_sq(phi))
                    .collect()
            })
            .collect(),
    };
    let blocks = trials.div_ceil(MC_BLOCK);
    let counts = mapper.map_indices(blocks as usize, |b| {
        let b = b as u64;
        let n = MC_BLOCK.min(trials - b * MC_BLOCK);
        run_block(&tables, seed, b, n)
    });
    let passes: u64 = counts.iter().sum();
    let estimate = passes as f64 / trials as f64;
    Ok(McEstimate {
        estimate,
        std_error: libm::sqrt(estimate * (1.0 - estimate) / trials as f64),
        trials,
        passes,
    })
}

/// The two-element POMs as family members, for end-point checks.
pub fn family_endpoints() -> [(ThreeElementFamily, &'static str); 2] {
    [
        (
            ThreeElementFamily {
                case: FamilyCase::WithPi,
                cos_omega: 0.0,
            },
            "left/right",
        ),
        (
            ThreeElementFamily {
                case: FamilyCase::WithPi,
                cos_omega: 1.0,
            },
            "up/down",
        ),
    ]
}
