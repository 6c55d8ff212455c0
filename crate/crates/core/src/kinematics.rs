//! Velocities, speeds and signed squared quadrispeeds along a one-parameter
//! family of seven-parameter states.
//!
//! Each branch uses its own pseudo-time: branch 1 is clocked by `t₋`,
//! branch 2 by `t₊`. With an intrinsic parameter θ the velocity is the ratio
//! `(dX/dθ) / (dt/dθ)`, so it does not depend on how θ itself is chosen.
//! Speeds above 1 are allowed; the quadrispeed square `1 − V²` then goes
//! negative and no root is taken.

use std::fmt;

use serde::Serialize;

use crate::cmm::{coords_from_d7, CmmCoords};
use crate::error::{Error, Result};
use crate::state::D7Params;

/// A curve θ ↦ D7Params on a closed domain.
///
/// Implementations are shared across threads by the trajectory engine and
/// must be callable concurrently.
pub trait ParametricD7Model: Send + Sync {
    /// `(lo, hi)`; `hi` may be `f64::INFINITY`.
    fn domain(&self) -> (f64, f64);

    fn d7(&self, theta: f64) -> Result<D7Params>;

    /// `dD7Params/dθ` when known in closed form.
    fn d7_derivative(&self, _theta: f64) -> Option<D7Params> {
        None
    }

    /// The mixing weight for models that have one.
    fn x_value(&self, _theta: f64) -> Option<f64> {
        None
    }

    fn contains(&self, theta: f64) -> bool {
        let (lo, hi) = self.domain();
        theta >= lo && theta <= hi
    }
}

impl<M: ParametricD7Model + ?Sized> ParametricD7Model for &M {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn d7(&self, theta: f64) -> Result<D7Params> {
        (**self).d7(theta)
    }
    fn d7_derivative(&self, theta: f64) -> Option<D7Params> {
        (**self).d7_derivative(theta)
    }
    fn x_value(&self, theta: f64) -> Option<f64> {
        (**self).x_value(theta)
    }
}

impl<M: ParametricD7Model + ?Sized> ParametricD7Model for Box<M> {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn d7(&self, theta: f64) -> Result<D7Params> {
        (**self).d7(theta)
    }
    fn d7_derivative(&self, theta: f64) -> Option<D7Params> {
        (**self).d7_derivative(theta)
    }
    fn x_value(&self, theta: f64) -> Option<f64> {
        (**self).x_value(theta)
    }
}

/// Hides the analytic derivative of the wrapped model so every derivative
/// goes through finite differences.
#[derive(Debug, Clone)]
pub struct FiniteDifferenceOnly<M>(pub M);

impl<M: ParametricD7Model> ParametricD7Model for FiniteDifferenceOnly<M> {
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }
    fn d7(&self, theta: f64) -> Result<D7Params> {
        self.0.d7(theta)
    }
    fn x_value(&self, theta: f64) -> Option<f64> {
        self.0.x_value(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    One,
    Two,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::One => write!(f, "1"),
            Branch::Two => write!(f, "2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    /// Finite-difference step; `None` means `1e-5 · max(1, |θ|)`.
    pub step: Option<f64>,
    /// Smallest `|dt/dθ|` accepted as a running clock.
    pub eps_den: f64,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self { step: None, eps_den: 1e-12 }
    }
}

impl DiffOptions {
    pub fn with_step(step: f64) -> Self {
        Self { step: Some(step), ..Self::default() }
    }

    fn step_at(&self, theta: f64) -> f64 {
        self.step.unwrap_or_else(|| 1e-5 * theta.abs().max(1.0))
    }
}

/// Field-wise `dc/dθ` of the eight coordinates, stored in a [`CmmCoords`].
pub type CoordRates = CmmCoords;

/// Linear part of the coordinate map applied to a parameter derivative.
pub fn rates_from_d7_derivative(dd: &D7Params) -> CoordRates {
    CmmCoords {
        t_minus: -0.5 * dd.mzz,
        u_minus: 0.5 * (dd.p1z - dd.p2z),
        v_plus: 0.5 * (dd.mxx + dd.myy),
        w_minus: 0.5 * (dd.myx - dd.mxy),
        t_plus: 0.5 * dd.mzz,
        u_plus: 0.5 * (dd.p1z + dd.p2z),
        v_minus: 0.5 * (dd.mxx - dd.myy),
        w_plus: 0.5 * (dd.myx + dd.mxy),
    }
}

/// `dc/dθ` for all eight coordinates: the analytic derivative when the model
/// provides one, otherwise finite differences.
pub fn coordinate_derivatives(
    model: &dyn ParametricD7Model,
    theta: f64,
    opts: &DiffOptions,
) -> Result<CoordRates> {
    check_in_domain(model, theta)?;
    match model.d7_derivative(theta) {
        Some(dd) => Ok(rates_from_d7_derivative(&dd)),
        None => finite_difference_rates(model, theta, opts.step_at(theta)),
    }
}

/// Central differences in the interior; second-order one-sided stencils
/// where `θ ± h` would leave the domain.
pub fn finite_difference_rates(
    model: &dyn ParametricD7Model,
    theta: f64,
    h: f64,
) -> Result<CoordRates> {
    check_in_domain(model, theta)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("finite-difference step {h} must be positive")));
    }
    let (lo, hi) = model.domain();
    let at = |t: f64| -> Result<[f64; 8]> { Ok(flatten(&coords_from_d7(&model.d7(t)?))) };

    let rates = if theta - h >= lo && theta + h <= hi {
        let (a, b) = (at(theta - h)?, at(theta + h)?);
        std::array::from_fn(|i| (b[i] - a[i]) / (2.0 * h))
    } else if theta + 2.0 * h <= hi {
        let (c0, c1, c2) = (at(theta)?, at(theta + h)?, at(theta + 2.0 * h)?);
        std::array::from_fn(|i| (-3.0 * c0[i] + 4.0 * c1[i] - c2[i]) / (2.0 * h))
    } else if theta - 2.0 * h >= lo {
        let (c0, c1, c2) = (at(theta)?, at(theta - h)?, at(theta - 2.0 * h)?);
        std::array::from_fn(|i| (3.0 * c0[i] - 4.0 * c1[i] + c2[i]) / (2.0 * h))
    } else {
        return Err(Error::Domain(format!(
            "domain [{lo}, {hi}] too narrow for step {h}"
        )));
    };
    Ok(unflatten(rates))
}

fn check_in_domain(model: &dyn ParametricD7Model, theta: f64) -> Result<()> {
    if model.contains(theta) {
        Ok(())
    } else {
        let (lo, hi) = model.domain();
        Err(Error::Domain(format!("theta={theta} outside [{lo}, {hi}]")))
    }
}

fn flatten(c: &CmmCoords) -> [f64; 8] {
    [
        c.t_minus, c.u_minus, c.v_plus, c.w_minus, c.t_plus, c.u_plus, c.v_minus, c.w_plus,
    ]
}

fn unflatten(a: [f64; 8]) -> CmmCoords {
    CmmCoords {
        t_minus: a[0],
        u_minus: a[1],
        v_plus: a[2],
        w_minus: a[3],
        t_plus: a[4],
        u_plus: a[5],
        v_minus: a[6],
        w_plus: a[7],
    }
}

/// Velocity of one branch from precomputed rates.
pub fn velocity_from_rates(
    rates: &CoordRates,
    theta: f64,
    branch: Branch,
    transposed: bool,
    eps_den: f64,
) -> Result<[f64; 3]> {
    let r = rates;
    let (clock, spatial) = match (branch, transposed) {
        (Branch::One, false) => (r.t_minus, [r.u_minus, r.v_plus, r.w_minus]),
        (Branch::One, true) => (r.t_minus, [r.u_minus, r.v_minus, r.w_plus]),
        (Branch::Two, false) => (r.t_plus, [r.u_plus, r.v_minus, r.w_plus]),
        (Branch::Two, true) => (r.t_plus, [r.u_plus, r.v_plus, r.w_minus]),
    };
    if !(clock.abs() >= eps_den) {
        return Err(Error::DegenerateClock { theta, branch, rate: clock });
    }
    Ok(spatial.map(|s| s / clock))
}

pub fn velocity(
    model: &dyn ParametricD7Model,
    theta: f64,
    branch: Branch,
    transposed: bool,
    opts: &DiffOptions,
) -> Result<[f64; 3]> {
    let rates = coordinate_derivatives(model, theta, opts)?;
    velocity_from_rates(&rates, theta, branch, transposed, opts.eps_den)
}

pub fn speed(
    model: &dyn ParametricD7Model,
    theta: f64,
    branch: Branch,
    transposed: bool,
    opts: &DiffOptions,
) -> Result<f64> {
    velocity(model, theta, branch, transposed, opts).map(|v| norm(&v))
}

/// `1 − V²`, signed.
pub fn quadrispeed_sq(
    model: &dyn ParametricD7Model,
    theta: f64,
    branch: Branch,
    transposed: bool,
    opts: &DiffOptions,
) -> Result<f64> {
    speed(model, theta, branch, transposed, opts).map(|s| 1.0 - s * s)
}

fn norm(v: &[f64; 3]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Motion of one branch at one θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchMotion {
    pub velocity: [f64; 3],
    pub speed: f64,
    pub qspeed_sq: f64,
}

impl BranchMotion {
    fn from_velocity(velocity: [f64; 3]) -> Self {
        let speed = norm(&velocity);
        Self { velocity, speed, qspeed_sq: 1.0 - speed * speed }
    }
}

/// All four branch motions at one θ. `None` marks a stationary clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicSample {
    pub theta: f64,
    pub motion1: Option<BranchMotion>,
    pub motion2: Option<BranchMotion>,
    pub motion1t: Option<BranchMotion>,
    pub motion2t: Option<BranchMotion>,
}

impl KinematicSample {
    pub fn speeds(&self) -> [Option<f64>; 4] {
        self.motions().map(|m| m.map(|m| m.speed))
    }

    pub fn qspeeds_sq(&self) -> [Option<f64>; 4] {
        self.motions().map(|m| m.map(|m| m.qspeed_sq))
    }

    /// In order `1, 2, 1ᵀ, 2ᵀ`.
    pub fn motions(&self) -> [Option<BranchMotion>; 4] {
        [self.motion1, self.motion2, self.motion1t, self.motion2t]
    }
}

pub fn sample_kinematics(
    model: &dyn ParametricD7Model,
    theta: f64,
    opts: &DiffOptions,
) -> Result<KinematicSample> {
    let rates = coordinate_derivatives(model, theta, opts)?;
    let motion = |branch, transposed| {
        velocity_from_rates(&rates, theta, branch, transposed, opts.eps_den)
            .ok()
            .map(BranchMotion::from_velocity)
    };
    Ok(KinematicSample {
        theta,
        motion1: motion(Branch::One, false),
        motion2: motion(Branch::Two, false),
        motion1t: motion(Branch::One, true),
        motion2t: motion(Branch::Two, true),
    })
}
