//! Parametric sweeps and detection of entanglement sudden death / revival.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cmm::{coords_from_d7, quad_distances, region_of, CmmCoords, PtDriver, QuadDistances, RegionLabel};
use crate::error::{Error, Result};
use crate::kinematics::{sample_kinematics, DiffOptions, KinematicSample, ParametricD7Model};
use crate::ppt::d7_eigenvalues;
use crate::state::D7Params;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Width of the light-like band used for region labels.
    pub tol: f64,
    pub diff: DiffOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, diff: DiffOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub theta: f64,
    pub x_value: Option<f64>,
    pub d7: D7Params,
    pub coords: CmmCoords,
    pub quad: QuadDistances,
    pub region: RegionLabel,
    pub kinematics: KinematicSample,
    /// Smallest eigenvalue of the state; negative marks a non-physical point.
    pub min_eigenvalue: f64,
}

/// `n` evenly spaced values from `lo` to `hi`, both included exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

pub fn evaluate_point(
    model: &dyn ParametricD7Model,
    theta: f64,
    opts: &TraceOptions,
) -> Result<TrajectoryPoint> {
    let d7 = model.d7(theta)?;
    let coords = coords_from_d7(&d7);
    let quad = quad_distances(&coords);
    Ok(TrajectoryPoint {
        theta,
        x_value: model.x_value(theta),
        d7,
        coords,
        quad,
        region: region_of(&quad, opts.tol),
        kinematics: sample_kinematics(model, theta, &opts.diff)?,
        min_eigenvalue: d7_eigenvalues(&d7).min(),
    })
}

/// One point per grid value, in grid order. Points are evaluated in
/// parallel; the result does not depend on scheduling.
pub fn trace_trajectory(
    model: &dyn ParametricD7Model,
    grid: &[f64],
    opts: &TraceOptions,
) -> Result<Vec<TrajectoryPoint>> {
    if grid.len() < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {}", grid.len())));
    }
    if grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Domain("grid must be sorted ascending".into()));
    }
    if let Some(bad) = grid.iter().find(|t| !model.contains(**t)) {
        let (lo, hi) = model.domain();
        return Err(Error::Domain(format!("grid value {bad} outside [{lo}, {hi}]")));
    }
    grid.par_iter()
        .map(|&theta| evaluate_point(model, theta, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CrossingKind {
    /// Entangled-like to separable-like as θ increases.
    SuddenDeath,
    /// Separable-like to entangled-like as θ increases.
    Revival,
}

impl fmt::Display for CrossingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingKind::SuddenDeath => write!(f, "sudden_death"),
            CrossingKind::Revival => write!(f, "revival"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingEvent {
    pub theta_star: f64,
    pub kind: CrossingKind,
    pub driver: PtDriver,
    /// Width of the final bisection bracket.
    pub refinement_width: f64,
    /// `min(s1t_sq, s2t_sq)` at `theta_star`.
    pub indicator: f64,
}

/// A coarse cell whose midpoint disagrees in sign with both ends, so it holds
/// at least two crossings and may hide more.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionWarning {
    pub cell_lo: f64,
    pub cell_hi: f64,
}

impl fmt::Display for ResolutionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "several crossings inside coarse cell [{}, {}]; results are resolution-limited",
            self.cell_lo, self.cell_hi
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CrossingScan {
    pub events: Vec<CrossingEvent>,
    pub warnings: Vec<ResolutionWarning>,
}

pub const DEFAULT_COARSE_N: usize = 256;
pub const DEFAULT_CROSSING_TOL: f64 = 1e-9;

fn indicator(model: &dyn ParametricD7Model, theta: f64) -> Result<(f64, PtDriver)> {
    let q = quad_distances(&coords_from_d7(&model.d7(theta)?));
    let r = region_of(&q, 0.0);
    Ok((r.value, r.driver))
}

/// Scans `min(s1t_sq, s2t_sq)` on `coarse_n` evenly spaced points and
/// bisects every sign change down to a bracket of width `tol`.
pub fn find_crossings(
    model: &dyn ParametricD7Model,
    theta_lo: f64,
    theta_hi: f64,
    coarse_n: usize,
    tol: f64,
) -> Result<CrossingScan> {
    if !(theta_lo < theta_hi) {
        return Err(Error::Domain(format!("empty interval [{theta_lo}, {theta_hi}]")));
    }
    if coarse_n < 2 {
        return Err(Error::Domain(format!("coarse_n must be at least 2, got {coarse_n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("bisection tolerance {tol} must be positive")));
    }
    if !model.contains(theta_lo) || !model.contains(theta_hi) {
        let (lo, hi) = model.domain();
        return Err(Error::Domain(format!(
            "[{theta_lo}, {theta_hi}] not inside model domain [{lo}, {hi}]"
        )));
    }

    let grid = linspace(theta_lo, theta_hi, coarse_n);
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| indicator(model, t).map(|v| v.0))
        .collect::<Result<_>>()?;

    let mut scan = CrossingScan::default();
    for k in 0..grid.len() - 1 {
        let (a, b) = (grid[k], grid[k + 1]);
        let (fa, fb) = (values[k], values[k + 1]);
        if is_negative(fa) != is_negative(fb) {
            scan.events.push(bisect(model, a, b, fa, tol)?);
            continue;
        }
        let m = 0.5 * (a + b);
        let (fm, _) = indicator(model, m)?;
        if is_negative(fm) != is_negative(fa) {
            scan.warnings.push(ResolutionWarning { cell_lo: a, cell_hi: b });
            scan.events.push(bisect(model, a, m, fa, tol)?);
            scan.events.push(bisect(model, m, b, fm, tol)?);
        }
    }
    scan.events.sort_by(|x, y| x.theta_star.total_cmp(&y.theta_star));
    Ok(scan)
}

fn is_negative(v: f64) -> bool {
    v < 0.0
}

fn bisect(
    model: &dyn ParametricD7Model,
    mut a: f64,
    mut b: f64,
    fa: f64,
    tol: f64,
) -> Result<CrossingEvent> {
    let start_negative = is_negative(fa);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if is_negative(indicator(model, m)?.0) == start_negative {
            a = m;
        } else {
            b = m;
        }
    }
    let theta_star = 0.5 * (a + b);
    let (value, driver) = indicator(model, theta_star)?;
    Ok(CrossingEvent {
        theta_star,
        kind: if start_negative { CrossingKind::SuddenDeath } else { CrossingKind::Revival },
        driver,
        refinement_width: b - a,
        indicator: value,
    })
}
