//! Compact Minkowski manifold coordinates of seven-parameter states and the
//! signed squared quadridistances built from them.
//!
//! Quadridistances are carried as signed squares. `(s₂ᵀ)²` reaches −1 for
//! the pure singlet, so a real root does not exist everywhere; take roots
//! only for display, with [`signed_root`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ppt::Region;
use crate::state::D7Params;

/// The eight coordinates grouped by branch:
/// branch 1 is `(t₋, u₋, v₊, w₋)`, branch 2 is `(t₊, u₊, v₋, w₊)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CmmCoords {
    pub t_minus: f64,
    pub u_minus: f64,
    pub v_plus: f64,
    pub w_minus: f64,
    pub t_plus: f64,
    pub u_plus: f64,
    pub v_minus: f64,
    pub w_plus: f64,
}

impl CmmCoords {
    pub fn branch1(&self) -> [f64; 4] {
        [self.t_minus, self.u_minus, self.v_plus, self.w_minus]
    }

    pub fn branch2(&self) -> [f64; 4] {
        [self.t_plus, self.u_plus, self.v_minus, self.w_plus]
    }

    /// `X₁ = √(u₋² + v₊² + w₋²)`.
    pub fn branch1_spatial_norm(&self) -> f64 {
        norm3(self.u_minus, self.v_plus, self.w_minus)
    }

    /// `X₂ = √(u₊² + v₋² + w₊²)`.
    pub fn branch2_spatial_norm(&self) -> f64 {
        norm3(self.u_plus, self.v_minus, self.w_plus)
    }

    pub fn max_abs_diff(&self, other: &CmmCoords) -> f64 {
        self.branch1()
            .iter()
            .chain(self.branch2().iter())
            .zip(other.branch1().iter().chain(other.branch2().iter()))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn norm3(a: f64, b: f64, c: f64) -> f64 {
    (a * a + b * b + c * c).sqrt()
}

/// Signed squared quadridistances of the state (`s1_sq`, `s2_sq`) and of its
/// partial transpose (`s1t_sq`, `s2t_sq`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadDistances {
    pub s1_sq: f64,
    pub s2_sq: f64,
    pub s1t_sq: f64,
    pub s2t_sq: f64,
}

impl QuadDistances {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s1_sq, self.s2_sq, self.s1t_sq, self.s2t_sq]
    }

    /// `min(s1t_sq, s2t_sq)`, the entanglement indicator.
    pub fn pt_min(&self) -> f64 {
        self.s1t_sq.min(self.s2t_sq)
    }
}

/// Which transposed quadridistance decided a [`RegionLabel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PtDriver {
    S1t,
    S2t,
}

impl PtDriver {
    pub fn column(self) -> &'static str {
        match self {
            PtDriver::S1t => "s1t_sq",
            PtDriver::S2t => "s2t_sq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionLabel {
    pub label: Region,
    pub driver: PtDriver,
    pub value: f64,
}

pub fn coords_from_d7(d: &D7Params) -> CmmCoords {
    CmmCoords {
        t_minus: 0.5 * (1.0 - d.mzz),
        u_minus: 0.5 * (d.p1z - d.p2z),
        v_plus: 0.5 * (d.mxx + d.myy),
        w_minus: 0.5 * (d.myx - d.mxy),
        t_plus: 0.5 * (1.0 + d.mzz),
        u_plus: 0.5 * (d.p1z + d.p2z),
        v_minus: 0.5 * (d.mxx - d.myy),
        w_plus: 0.5 * (d.myx + d.mxy),
    }
}

/// Coordinates of the partially transposed state: `v₊ ⇄ v₋`, `w₊ ⇄ w₋`.
pub fn pt_coords(c: &CmmCoords) -> CmmCoords {
    CmmCoords {
        v_plus: c.v_minus,
        v_minus: c.v_plus,
        w_plus: c.w_minus,
        w_minus: c.w_plus,
        ..*c
    }
}

pub fn quad_distances(c: &CmmCoords) -> QuadDistances {
    let sq = |t: f64, u: f64, v: f64, w: f64| t * t - (u * u + v * v + w * w);
    QuadDistances {
        s1_sq: sq(c.t_minus, c.u_minus, c.v_plus, c.w_minus),
        s2_sq: sq(c.t_plus, c.u_plus, c.v_minus, c.w_plus),
        s1t_sq: sq(c.t_minus, c.u_minus, c.v_minus, c.w_plus),
        s2t_sq: sq(c.t_plus, c.u_plus, c.v_plus, c.w_minus),
    }
}

/// `|s1² + s2² − (s1ᵀ)² − (s2ᵀ)²|`, measured rather than assumed.
pub fn invariance_residual(q: &QuadDistances) -> f64 {
    (q.s1_sq + q.s2_sq - q.s1t_sq - q.s2t_sq).abs()
}

pub fn region_of(q: &QuadDistances, tol: f64) -> RegionLabel {
    let (driver, value) = if q.s2t_sq < q.s1t_sq {
        (PtDriver::S2t, q.s2t_sq)
    } else {
        (PtDriver::S1t, q.s1t_sq)
    };
    RegionLabel { label: Region::from_indicator(value, tol), driver, value }
}

/// The 45° comparison line `(t, u, v, w) = (x, 0, x, 0)` used as a plot overlay.
pub fn lightcone_reference(x: f64) -> Result<[f64; 4]> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("light-cone parameter {x} outside [0, 1]")));
    }
    Ok([x, 0.0, x, 0.0])
}

/// `sign(s²)·√|s²|`; used only when printing distances.
pub fn signed_root(sq: f64) -> f64 {
    sq.signum() * sq.abs().sqrt()
}
