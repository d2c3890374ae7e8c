//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use mirror_fidelity::boundary::{fidelity_boundary_p, fidelity_boundary_theta};
use mirror_fidelity::fidelity::{
    best_fidelity_for_pom, eigen_decompose, eta, left_right_retransmission, nu_plus_closed_form,
    o_operator, o_operator_closed_form, optimal_retransmission,
};
use mirror_fidelity::min_error::{
    a_parameter, min_error_threshold, regime_comparison, three_element_pom, two_element_pom,
};
use mirror_fidelity::oracle::{
    family_scan_with, monte_carlo_fidelity, monte_carlo_fidelity_with, random_planar_pom,
    random_planar_search_with, IndexMap, Sequential,
};
use mirror_fidelity::qubit::{Ensemble, HermitianOp2, MirrorEnsemble, PomElement};
use mirror_fidelity::strategy::{
    abc_coefficients, build_optimal_strategy, classify_coefficients, max_fidelity, regime_threshold,
};
use mirror_fidelity::Regime;
use mirror_fidelity_cli::exec::Parallel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn grid(n: usize) -> Vec<MirrorEnsemble> {
    (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                let p = 0.5 * i as f64 / (n - 1) as f64;
                let t = FRAC_PI_2 * j as f64 / (n - 1) as f64;
                MirrorEnsemble::new(p, t).unwrap()
            })
        })
        .collect()
}

fn ac1_oracle_equivalence(exec: &Parallel) -> Outcome {
    let points = grid(50);
    let gaps = exec.map_indices(points.len(), |i| {
        let e = &points[i];
        let scan = family_scan_with(e, 201, &Sequential).unwrap();
        (scan.best_fidelity - max_fidelity(&abc_coefficients(e))).abs()
    });
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    outcome(
        worst < 1e-8,
        format!("50x50 grid, max |family scan - closed form| = {worst:.2e} (tol 1e-8)"),
    )
}

fn ac2_trine_degeneracy() -> Outcome {
    let e = MirrorEnsemble::trine();
    let worst = (0..1000u64)
        .map(|s| {
            let pom = random_planar_pom(1 + (s % 4) as usize, s).unwrap();
            (best_fidelity_for_pom(&e, &pom).0 - 0.75).abs()
        })
        .fold(0.0, f64::max);
    let identity = e.antiweighted_sum().max_abs_diff(&HermitianOp2::IDENTITY);
    outcome(
        worst <= 1e-9 && identity <= 1e-10,
        format!(
            "1000 random POMs, max |F - 0.75| = {worst:.2e} (tol 1e-9); identity residual {identity:.2e} (tol 1e-10)"
        ),
    )
}

fn ac3_fidelity_boundary() -> Outcome {
    let worst = (1..=20)
        .map(|i| {
            let t = (45.0 + 45.0 * i as f64 / 21.0).to_radians();
            let root = fidelity_boundary_p(t, 1e-13).unwrap_or(f64::INFINITY);
            (root - regime_threshold(t).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let low = fidelity_boundary_theta(0.0, 1e-13).unwrap().to_degrees();
    let high = fidelity_boundary_theta(0.5, 1e-13).unwrap().to_degrees();
    let ends = (low - 45.0).abs().max((high - 90.0).abs());
    outcome(
        worst < 1e-9 && ends < 1e-9,
        format!(
            "20 angles, max |root - threshold| = {worst:.2e} (tol 1e-9); endpoints ({low:.10}°, 0) and ({high:.10}°, 1/2)"
        ),
    )
}

fn ac4_central_claim(exec: &Parallel) -> Outcome {
    let points = grid(50);
    let cmps = exec.map_indices(points.len(), |i| regime_comparison(&points[i]));
    let disagree = cmps
        .iter()
        .filter(|c| c.max_fidelity - c.minerror_fidelity >= 1e-3)
        .count();
    let row: Vec<_> = points
        .iter()
        .zip(&cmps)
        .filter(|(e, _)| e.p() == 0.5)
        .map(|(_, c)| (c.max_fidelity - c.minerror_fidelity).abs())
        .collect();
    let row_worst = row.iter().copied().fold(0.0, f64::max);
    let example = regime_comparison(&MirrorEnsemble::new(0.4, 75f64.to_radians()).unwrap());
    outcome(
        disagree > 0 && !row.is_empty() && row_worst < 1e-12,
        format!(
            "{disagree} points with F gap >= 1e-3 (e.g. (0.4, 75°): {:.4} vs {:.4}); p = 1/2 row max gap {row_worst:.2e} (tol 1e-12)",
            example.max_fidelity, example.minerror_fidelity
        ),
    )
}

fn ac5_min_error_boundary() -> Outcome {
    let (mut worst_a, mut worst_pom) = (0.0f64, 0.0f64);
    // a is 0/0 at θ = 0 and θ = π/2, so sample the open interval.
    for i in 1..=20 {
        let t = FRAC_PI_2 * i as f64 / 21.0;
        let p = min_error_threshold(t);
        let a = a_parameter(p, t);
        worst_a = worst_a.max((a - 1.0).abs());
        let diff = three_element_pom(a)
            .max_element_diff(&two_element_pom())
            .unwrap_or(f64::INFINITY);
        worst_pom = worst_pom.max(diff);
    }
    outcome(
        worst_a < 1e-10 && worst_pom < 1e-10,
        format!("20 boundary points, max |a - 1| = {worst_a:.2e}, max element diff = {worst_pom:.2e} (tol 1e-10)"),
    )
}

fn ac6_eigen_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_nu, mut worst_matrix, mut worst_psd) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let e = MirrorEnsemble::new(0.5 * rng.random::<f64>(), FRAC_PI_2 * rng.random::<f64>())
            .unwrap();
        let el = PomElement::new(
            rng.random::<f64>(),
            PI * (2.0 * rng.random::<f64>() - 1.0),
            PI * (rng.random::<f64>() - 0.5),
        )
        .unwrap();
        let o = o_operator(&e, &el);
        worst_matrix = worst_matrix.max(o.max_abs_diff(&o_operator_closed_form(&e, &el)));
        worst_nu = worst_nu.max((nu_plus_closed_form(&e, &el) - eigen_decompose(&o).nu_plus).abs());
        worst_psd = worst_psd.min(o.eigenvalues().1);
    }
    outcome(
        worst_nu < 1e-10 && worst_matrix < 1e-10 && worst_psd >= -1e-12,
        format!(
            "10^4 pairs, max |nu+ closed - eigen| = {worst_nu:.2e} (tol 1e-10); matrix forms {worst_matrix:.2e}; min eigenvalue {worst_psd:.2e}"
        ),
    )
}

fn ac7_retransmission() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut n, mut worst_overlap, mut sign_ok) = (0, 1.0f64, true);
    while n < 1000 {
        let e = MirrorEnsemble::new(0.5 * rng.random::<f64>(), FRAC_PI_2 * rng.random::<f64>())
            .unwrap();
        if classify_coefficients(&abc_coefficients(&e)).tag != Regime::LeftRight || eta(&e).is_err()
        {
            continue;
        }
        n += 1;
        for sign in [1.0, -1.0] {
            let (eta, y, closed) = left_right_retransmission(&e, sign).unwrap();
            let el = PomElement::planar(0.5, sign * FRAC_PI_2).unwrap();
            let numeric = optimal_retransmission(&e, &el).unwrap();
            worst_overlap = worst_overlap.min(closed.overlap_sq(&numeric));
            let shift = 1.0 - y.abs();
            if eta != 0.0 && (shift > 0.0) != (eta > 0.0) {
                sign_ok = false;
            }
        }
    }
    outcome(
        worst_overlap > 1.0 - 1e-12 && sign_ok,
        format!(
            "1000 left/right ensembles, min overlap = 1 - {:.2e} (tol 1e-12); shift sign {}",
            1.0 - worst_overlap,
            if sign_ok { "holds" } else { "violated" }
        ),
    )
}

fn ac8_monte_carlo() -> Outcome {
    let e = MirrorEnsemble::new(0.3, 45f64.to_radians()).unwrap();
    let s = build_optimal_strategy(&e);
    let f = 0.5 + 0.13f64.sqrt();
    let trials = 1_000_000;
    let mc = monte_carlo_fidelity(&e, &s.pom, &s.retrans, trials, 1).unwrap();
    let bound = 4.0 * (f * (1.0 - f) / trials as f64).sqrt();
    let rerun = monte_carlo_fidelity(&e, &s.pom, &s.retrans, trials, 1).unwrap();
    let workers_agree = [1, 2, 4].into_iter().all(|t| {
        monte_carlo_fidelity_with(&e, &s.pom, &s.retrans, trials, 1, &Parallel::new(t)).unwrap()
            == mc
    });
    let dev = (mc.estimate - f).abs();
    outcome(
        dev <= bound && rerun == mc && workers_agree,
        format!(
            "estimate {:.6} vs {f:.6}, |dev| = {dev:.2e} (4σ = {bound:.2e}); rerun identical: {}; 1/2/4 workers identical: {workers_agree}",
            mc.estimate,
            rerun == mc
        ),
    )
}

fn ac9_no_superoptimality(exec: &Parallel) -> Outcome {
    let points = grid(10);
    let excess = exec.map_indices(points.len(), |i| {
        let e = &points[i];
        let r = random_planar_search_with(e, 50, 1000 + i as u64, &Sequential).unwrap();
        r.best_fidelity - max_fidelity(&abc_coefficients(e))
    });
    let worst = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst <= 1e-6,
        format!("10x10 grid, 50 restarts, max (search - closed form) = {worst:.2e} (tol 1e-6)"),
    )
}

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let exec = Parallel::new(0);
    let criteria: [Criterion; 9] = [
        (
            "AC1",
            "oracle equivalence",
            Box::new(|| ac1_oracle_equivalence(&exec)),
        ),
        ("AC2", "trine degeneracy", Box::new(ac2_trine_degeneracy)),
        ("AC3", "fidelity boundary", Box::new(ac3_fidelity_boundary)),
        (
            "AC4",
            "min-error vs fidelity",
            Box::new(|| ac4_central_claim(&exec)),
        ),
        (
            "AC5",
            "min-error boundary",
            Box::new(ac5_min_error_boundary),
        ),
        ("AC6", "eigen consistency", Box::new(ac6_eigen_consistency)),
        (
            "AC7",
            "retransmission closed form",
            Box::new(ac7_retransmission),
        ),
        ("AC8", "monte carlo", Box::new(ac8_monte_carlo)),
        (
            "AC9",
            "no superoptimality",
            Box::new(|| ac9_no_superoptimality(&exec)),
        ),
    ];
    let mut failed = 0;
    for (id, name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {id} {name}: {} [{:.2}s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "{}/{} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
