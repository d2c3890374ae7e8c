//! Regime map over the `(p, θ)` plane plus the two boundary curves.

use std::path::{Path, PathBuf};

use mirror_fidelity::boundary::{fidelity_boundary_curve, min_error_boundary_curve};
use mirror_fidelity::min_error::{min_error_strategy, regime_comparison};
use mirror_fidelity::oracle::IndexMap;
use mirror_fidelity::strategy::{
    abc_coefficients, fidelity_left_right, fidelity_up_down, max_fidelity,
};
use mirror_fidelity::MirrorEnsemble;

use crate::output::{sig12, write_csv};
use crate::{CliError, Result};

pub const MAP_HEADER: [&str; 9] = [
    "p",
    "theta_deg",
    "f_lr",
    "f_ud",
    "f_max",
    "fidelity_regime",
    "minerror_regime",
    "p_error",
    "agree",
];

pub const BOUNDARY_HEADER: [&str; 2] = ["p", "theta_deg"];

/// Bisection tolerance on θ for the fidelity boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MapRow {
    pub p: f64,
    pub theta_deg: f64,
    pub f_lr: f64,
    pub f_ud: f64,
    pub f_max: f64,
    pub fidelity_regime: String,
    pub minerror_regime: String,
    pub p_error: f64,
    pub agree: bool,
}

impl MapRow {
    pub fn compute(p: f64, theta_deg: f64) -> Self {
        let e = MirrorEnsemble::new(p, theta_deg.to_radians()).expect("grid stays in range");
        let abc = abc_coefficients(&e);
        let cmp = regime_comparison(&e);
        MapRow {
            p,
            theta_deg,
            f_lr: fidelity_left_right(&abc),
            f_ud: fidelity_up_down(&abc),
            f_max: max_fidelity(&abc),
            fidelity_regime: cmp.fidelity_regime.to_string(),
            minerror_regime: cmp.minerror_regime.to_string(),
            p_error: min_error_strategy(&e).p_error,
            agree: cmp.minerror_pom_maximizes_fidelity,
        }
    }

    pub fn fields(&self) -> Vec<String> {
        vec![
            sig12(self.p),
            sig12(self.theta_deg),
            sig12(self.f_lr),
            sig12(self.f_ud),
            sig12(self.f_max),
            self.fidelity_regime.clone(),
            self.minerror_regime.clone(),
            sig12(self.p_error),
            self.agree.to_string(),
        ]
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Rows ordered by `p` ascending, then `θ` ascending.
pub fn map_rows<M: IndexMap>(p_steps: usize, theta_steps: usize, mapper: &M) -> Vec<MapRow> {
    let ps = linspace(0.0, 0.5, p_steps);
    let ts = linspace(0.0, 90.0, theta_steps);
    mapper.map_indices(p_steps * theta_steps, |i| {
        MapRow::compute(ps[i / theta_steps], ts[i % theta_steps])
    })
}

/// `(p, θ°)` on the fidelity boundary, one point per `p`.
pub fn fidelity_boundary(p_steps: usize) -> Vec<(f64, f64)> {
    fidelity_boundary_curve(&linspace(0.0, 0.5, p_steps), BOUNDARY_TOL)
        .into_iter()
        .map(|(p, t)| (p, t.to_degrees()))
        .collect()
}

/// `(p, θ°)` on the minimum-error boundary, one point per `θ`.
pub fn min_error_boundary(theta_steps: usize) -> Vec<(f64, f64)> {
    let ts: Vec<f64> = linspace(0.0, 90.0, theta_steps)
        .into_iter()
        .map(f64::to_radians)
        .collect();
    min_error_boundary_curve(&ts)
        .into_iter()
        .map(|(p, t)| (p, t.to_degrees()))
        .collect()
}

/// Paths of the boundary files written next to the map.
pub fn boundary_paths(out: &Path) -> (PathBuf, PathBuf) {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "map".to_owned());
    (
        out.with_file_name(format!("{stem}_fidelity_boundary.csv")),
        out.with_file_name(format!("{stem}_minerror_boundary.csv")),
    )
}

pub struct MapOutput {
    pub map: PathBuf,
    pub fidelity_boundary: PathBuf,
    pub minerror_boundary: PathBuf,
    pub rows: usize,
}

pub fn run_map<M: IndexMap>(
    p_steps: usize,
    theta_steps: usize,
    out: &Path,
    mapper: &M,
) -> Result<MapOutput> {
    if p_steps < 2 || theta_steps < 2 {
        return Err(CliError::Usage("grid steps must be at least 2".into()));
    }
    let rows = map_rows(p_steps, theta_steps, mapper);
    let fields: Vec<Vec<String>> = rows.iter().map(MapRow::fields).collect();
    write_csv(out, &MAP_HEADER, &fields)?;

    let pair_rows = |pts: Vec<(f64, f64)>| -> Vec<Vec<String>> {
        pts.into_iter()
            .map(|(p, t)| vec![sig12(p), sig12(t)])
            .collect()
    };
    let (fb, mb) = boundary_paths(out);
    write_csv(
        &fb,
        &BOUNDARY_HEADER,
        &pair_rows(fidelity_boundary(p_steps)),
    )?;
    write_csv(
        &mb,
        &BOUNDARY_HEADER,
        &pair_rows(min_error_boundary(theta_steps)),
    )?;
    Ok(MapOutput {
        map: out.to_path_buf(),
        fidelity_boundary: fb,
        minerror_boundary: mb,
        rows: rows.len(),
    })
}
