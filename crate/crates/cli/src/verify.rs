//! Grid verification suite: every closed form checked against an
//! independent route, with worst-case residuals.

use mirror_fidelity::boundary::fidelity_boundary_p;
use mirror_fidelity::fidelity::{
    best_fidelity_for_pom, eigen_decompose, nu_plus_closed_form, o_operator,
};
use mirror_fidelity::min_error::{min_error_strategy, regime_comparison};
use mirror_fidelity::oracle::{family_scan, random_planar_pom, random_planar_search, IndexMap};
use mirror_fidelity::qubit::{validate_pom, Ensemble};
use mirror_fidelity::strategy::{
    abc_coefficients, build_optimal_strategy, fidelity_left_right, fidelity_up_down, max_fidelity,
    regime_threshold,
};
use mirror_fidelity::{HermitianOp2, MirrorEnsemble, Regime};
use serde::Serialize;

use crate::map::linspace;

/// Resolution of the family scan used per grid point.
pub const SCAN_RESOLUTION: usize = 201;
/// Random POMs drawn for the eigenvalue check.
pub const RANDOM_POMS: usize = 20;
/// Restarts for the random search (run on a coarse subgrid).
pub const SEARCH_RESTARTS: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual against `tolerance`, or a count for existence checks.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub grid: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub agree_points: usize,
    pub disagree_points: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.tolerance > 0.0 {
                s.push_str(&format!(
                    "{status} {:<28} worst={:.3e} tol={:.0e} {}\n",
                    c.name, c.worst, c.tolerance, c.detail
                ));
            } else {
                s.push_str(&format!("{status} {:<28} {}\n", c.name, c.detail));
            }
        }
        s.push_str(&format!(
            "{}/{} checks passed on a {}x{} grid (seed {})\n",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.grid,
            self.grid,
            self.seed
        ));
        s
    }
}

struct PointResult {
    p: f64,
    oracle_gap: f64,
    report_gap: f64,
    eigen_gap: f64,
    min_error_valid: bool,
    agree: bool,
    disagree_margin: f64,
    regime: Regime,
    equal_prior_pom_gap: f64,
}

fn check_point(e: &MirrorEnsemble, poms: &[mirror_fidelity::Pom]) -> PointResult {
    let abc = abc_coefficients(e);
    let analytic = max_fidelity(&abc);
    let oracle = family_scan(e, SCAN_RESOLUTION).expect("resolution >= 2");
    let report = build_optimal_strategy(e);
    let report_gap = (best_fidelity_for_pom(e, &report.pom).0 - report.fidelity).abs();
    let eigen_gap = poms
        .iter()
        .flat_map(|pom| pom.iter())
        .map(|el| (nu_plus_closed_form(e, el) - eigen_decompose(&o_operator(e, el)).nu_plus).abs())
        .fold(0.0, f64::max);
    let me = min_error_strategy(e);
    let cmp = regime_comparison(e);
    let equal_prior_pom_gap = if e.p() == 0.5 {
        me.pom
            .max_element_diff(&report.pom)
            .unwrap_or(f64::INFINITY)
    } else {
        0.0
    };
    PointResult {
        p: e.p(),
        oracle_gap: (oracle.best_fidelity - analytic).abs(),
        report_gap,
        eigen_gap,
        min_error_valid: validate_pom(&me.pom).is_valid(),
        agree: cmp.minerror_pom_maximizes_fidelity,
        disagree_margin: cmp.max_fidelity - cmp.minerror_fidelity,
        regime: cmp.fidelity_regime,
        equal_prior_pom_gap,
    }
}

fn residual_check(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name,
        passed: worst < tolerance,
        worst,
        tolerance,
        detail,
    }
}

pub fn run_verify<M: IndexMap>(grid: usize, seed: u64, mapper: &M) -> VerifyReport {
    let ps = linspace(0.0, 0.5, grid);
    let ts = linspace(0.0, 90.0, grid);
    let poms: Vec<_> = (0..RANDOM_POMS as u64)
        .map(|i| random_planar_pom(1 + (i as usize % 4), seed.wrapping_add(i)).expect("feasible"))
        .collect();
    let points = mapper.map_indices(grid * grid, |i| {
        let e = MirrorEnsemble::new(ps[i / grid], ts[i % grid].to_radians()).expect("in range");
        check_point(&e, &poms)
    });

    let max_of = |f: fn(&PointResult) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let mut checks = vec![
        residual_check(
            "oracle_vs_analytic",
            max_of(|r| r.oracle_gap),
            1e-8,
            format!("family scan at resolution {SCAN_RESOLUTION}"),
        ),
        residual_check(
            "report_fidelity_attained",
            max_of(|r| r.report_gap),
            1e-10,
            "optimal POM re-evaluated via eigenvalues".into(),
        ),
        residual_check(
            "nu_plus_closed_form",
            max_of(|r| r.eigen_gap),
            1e-10,
            format!("{RANDOM_POMS} random planar POMs per point"),
        ),
    ];

    let invalid = points.iter().filter(|r| !r.min_error_valid).count();
    checks.push(Check {
        name: "min_error_pom_valid",
        passed: invalid == 0,
        worst: invalid as f64,
        tolerance: 0.0,
        detail: format!("{invalid} invalid POMs"),
    });

    // Degenerate branch: identity and tie along the fidelity boundary.
    let degenerate: Vec<(f64, f64, f64)> = ts
        .iter()
        .filter(|&&t| t > 45.0)
        .map(|&t| {
            let th = t.to_radians();
            let p = regime_threshold(th).expect("θ > 45°").min(0.5);
            let e = MirrorEnsemble::new(p, th).expect("in range");
            let abc = abc_coefficients(&e);
            let identity = e.antiweighted_sum().max_abs_diff(&HermitianOp2::IDENTITY);
            let tie = (fidelity_left_right(&abc) - fidelity_up_down(&abc)).abs();
            let root = fidelity_boundary_p(th, 1e-13).map_or(f64::INFINITY, |b| (b - p).abs());
            (identity, tie, root)
        })
        .collect();
    let worst = |k: usize| {
        degenerate
            .iter()
            .map(|d| [d.0, d.1, d.2][k])
            .fold(0.0, f64::max)
    };
    checks.push(residual_check(
        "degenerate_identity",
        worst(0),
        1e-10,
        format!("{} boundary points", degenerate.len()),
    ));
    checks.push(residual_check(
        "degenerate_tie",
        worst(1),
        1e-12,
        "F_lr vs F_ud at the threshold".into(),
    ));
    checks.push(residual_check(
        "boundary_bisection",
        worst(2),
        1e-9,
        "bisection root vs threshold".into(),
    ));

    let row: Vec<&PointResult> = points.iter().filter(|r| r.p == 0.5).collect();
    let row_gap = row
        .iter()
        .map(|r| r.equal_prior_pom_gap)
        .fold(0.0, f64::max);
    let row_agree = row.iter().all(|r| r.agree);
    checks.push(Check {
        name: "equal_priors_coincide",
        passed: row_gap < 1e-12 && row_agree && !row.is_empty(),
        worst: row_gap,
        tolerance: 1e-12,
        detail: format!("p = 1/2 row, {} points", row.len()),
    });

    let agree_points = points.iter().filter(|r| r.agree).count();
    let disagree_points = points
        .iter()
        .filter(|r| !r.agree && r.regime == Regime::UpDown && r.disagree_margin >= 1e-3)
        .count();
    checks.push(Check {
        name: "minerror_not_always_optimal",
        passed: agree_points > 0 && disagree_points > 0,
        worst: disagree_points as f64,
        tolerance: 0.0,
        detail: format!("{agree_points} agree, {disagree_points} up/down disagree"),
    });

    // Random search on a coarse subgrid: never above the closed form.
    let sub: Vec<(f64, f64)> = linspace(0.0, 0.5, 4)
        .into_iter()
        .flat_map(|p| linspace(0.0, 90.0, 4).into_iter().map(move |t| (p, t)))
        .collect();
    let excess = mapper
        .map_indices(sub.len(), |i| {
            let e = MirrorEnsemble::new(sub[i].0, sub[i].1.to_radians()).expect("in range");
            let r = random_planar_search(&e, SEARCH_RESTARTS, seed.wrapping_add(i as u64))
                .expect("restarts >= 1");
            r.best_fidelity - max_fidelity(&abc_coefficients(&e))
        })
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check {
        name: "no_superoptimal_search",
        passed: excess <= 1e-6,
        worst: excess.max(0.0),
        tolerance: 1e-6,
        detail: format!("4x4 subgrid, {SEARCH_RESTARTS} restarts"),
    });

    VerifyReport {
        grid,
        seed,
        checks,
        agree_points,
        disagree_points,
    }
}
