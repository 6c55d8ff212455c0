//! Built-in Werner-type family and tabulated user families.

use std::io::Read;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::kinematics::ParametricD7Model;
use crate::state::D7Params;

/// How the mixing weight `x` of the singlet/identity mixture depends on θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BewMode {
    /// θ is `x` itself, on `[0, 1]`.
    ParameterX,
    /// `x(t) = exp(−γt)`: pure singlet at `t = 0`, maximally mixed as `t → ∞`.
    Decay,
    /// `x(t) = 1 − exp(−γt)`: maximally mixed at `t = 0`, singlet as `t → ∞`.
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BewSpec {
    pub mode: BewMode,
    pub gamma: f64,
}

impl BewSpec {
    pub fn new(mode: BewMode, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { mode, gamma })
    }

    pub fn parameter_x() -> Self {
        Self { mode: BewMode::ParameterX, gamma: 1.0 }
    }
}

/// `ρ(x) = x|ψ₋⟩⟨ψ₋| + (1 − x)/4 · 1`, i.e. `Mxx = Myy = Mzz = −x` and
/// every other parameter zero.
pub fn bew_d7(x: f64) -> Result<D7Params> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("mixing weight x={x} outside [0, 1]")));
    }
    Ok(D7Params { mxx: -x, myy: -x, mzz: -x, ..D7Params::default() })
}

pub fn bew_x_of_t(spec: &BewSpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time t={t} must be non-negative")));
    }
    Ok(match spec.mode {
        BewMode::ParameterX => t,
        BewMode::Decay => (-spec.gamma * t).exp(),
        BewMode::Growth => -(-spec.gamma * t).exp_m1(),
    })
}

fn bew_dx_dt(spec: &BewSpec, t: f64) -> f64 {
    match spec.mode {
        BewMode::ParameterX => 1.0,
        BewMode::Decay => -spec.gamma * (-spec.gamma * t).exp(),
        BewMode::Growth => spec.gamma * (-spec.gamma * t).exp(),
    }
}

/// [`bew_d7`] composed with [`bew_x_of_t`], with the analytic derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BewModel {
    pub spec: BewSpec,
}

impl BewModel {
    pub fn new(spec: BewSpec) -> Self {
        Self { spec }
    }
}

impl ParametricD7Model for BewModel {
    fn domain(&self) -> (f64, f64) {
        match self.spec.mode {
            BewMode::ParameterX => (0.0, 1.0),
            BewMode::Decay | BewMode::Growth => (0.0, f64::INFINITY),
        }
    }

    fn d7(&self, theta: f64) -> Result<D7Params> {
        bew_d7(bew_x_of_t(&self.spec, theta)?)
    }

    fn d7_derivative(&self, theta: f64) -> Option<D7Params> {
        let dx = bew_dx_dt(&self.spec, theta);
        Some(D7Params { mxx: -dx, myy: -dx, mzz: -dx, ..D7Params::default() })
    }

    fn x_value(&self, theta: f64) -> Option<f64> {
        bew_x_of_t(&self.spec, theta).ok()
    }
}

/// The same parameters for every θ in the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantModel {
    pub params: D7Params,
    pub domain: (f64, f64),
}

impl ParametricD7Model for ConstantModel {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn d7(&self, _theta: f64) -> Result<D7Params> {
        Ok(self.params)
    }

    fn d7_derivative(&self, _theta: f64) -> Option<D7Params> {
        Some(D7Params::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolation {
    Linear,
    /// Piecewise cubic Hermite with Fritsch–Carlson slopes (no overshoot).
    CubicMonotone,
}

/// A user family given at knots and interpolated component-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedModel {
    thetas: Vec<f64>,
    rows: Vec<[f64; 7]>,
    slopes: Vec<[f64; 7]>,
    interpolation: Interpolation,
}

impl TabulatedModel {
    pub fn knots(&self) -> &[f64] {
        &self.thetas
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    fn evaluate(&self, theta: f64) -> [f64; 7] {
        let n = self.thetas.len();
        let k = match self.thetas.binary_search_by(|t| t.total_cmp(&theta)) {
            Ok(k) => return self.rows[k],
            Err(k) => (k.max(1) - 1).min(n - 2),
        };
        let h = self.thetas[k + 1] - self.thetas[k];
        let s = (theta - self.thetas[k]) / h;
        let (y0, y1) = (&self.rows[k], &self.rows[k + 1]);
        match self.interpolation {
            Interpolation::Linear => std::array::from_fn(|i| y0[i] + (y1[i] - y0[i]) * s),
            Interpolation::CubicMonotone => {
                let (m0, m1) = (&self.slopes[k], &self.slopes[k + 1]);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                std::array::from_fn(|i| {
                    h00 * y0[i] + h10 * h * m0[i] + h01 * y1[i] + h11 * h * m1[i]
                })
            }
        }
    }
}

impl ParametricD7Model for TabulatedModel {
    fn domain(&self) -> (f64, f64) {
        (self.thetas[0], self.thetas[self.thetas.len() - 1])
    }

    fn d7(&self, theta: f64) -> Result<D7Params> {
        if !self.contains(theta) {
            let (lo, hi) = self.domain();
            return Err(Error::Domain(format!("theta={theta} outside table range [{lo}, {hi}]")));
        }
        Ok(D7Params::from_array(self.evaluate(theta)))
    }
}

/// Validates the knots and precomputes interpolation slopes.
pub fn load_tabulated(
    rows: &[(f64, D7Params)],
    interpolation: Interpolation,
) -> Result<TabulatedModel> {
    if rows.len() < 2 {
        return Err(Error::MalformedTable(format!(
            "need at least 2 rows, got {}",
            rows.len()
        )));
    }
    for (i, (theta, d)) in rows.iter().enumerate() {
        if !theta.is_finite() || !d.is_finite() {
            return Err(Error::MalformedTable(format!("row {} has a non-finite value", i + 1)));
        }
    }
    for (i, w) in rows.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::MalformedTable(format!(
                "theta not strictly increasing at row {} ({} after {})",
                i + 2,
                w[1].0,
                w[0].0
            )));
        }
    }
    let thetas: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let values: Vec<[f64; 7]> = rows.iter().map(|r| r.1.to_array()).collect();
    let slopes = match interpolation {
        Interpolation::Linear => Vec::new(),
        Interpolation::CubicMonotone => {
            let per_component: Vec<Vec<f64>> = (0..7)
                .map(|c| {
                    let ys: Vec<f64> = values.iter().map(|v| v[c]).collect();
                    monotone_slopes(&thetas, &ys)
                })
                .collect();
            (0..thetas.len())
                .map(|k| std::array::from_fn(|c| per_component[c][k]))
                .collect()
        }
    };
    Ok(TabulatedModel { thetas, rows: values, slopes, interpolation })
}

/// Fritsch–Carlson knot slopes with shape-preserving three-point ends.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    m[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

pub const TABLE_HEADER: [&str; 8] = ["theta", "p1z", "p2z", "mxx", "myy", "mxy", "myx", "mzz"];

#[derive(Debug, Deserialize)]
struct TableRow {
    theta: f64,
    p1z: f64,
    p2z: f64,
    mxx: f64,
    myy: f64,
    mxy: f64,
    myx: f64,
    mzz: f64,
}

/// Reads a `theta,p1z,p2z,mxx,myy,mxy,myx,mzz` table, one knot per row.
pub fn read_table_csv<R: Read>(reader: R) -> Result<Vec<(f64, D7Params)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::MalformedTable(e.to_string()))?
        .clone();
    if headers.iter().ne(TABLE_HEADER.iter().copied()) {
        return Err(Error::MalformedTable(format!(
            "expected header `{}`, got `{}`",
            TABLE_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize::<TableRow>()
        .map(|row| {
            let r = row.map_err(|e| Error::MalformedTable(e.to_string()))?;
            Ok((
                r.theta,
                D7Params {
                    p1z: r.p1z,
                    p2z: r.p2z,
                    mxx: r.mxx,
                    myy: r.myy,
                    mxy: r.mxy,
                    myx: r.myx,
                    mzz: r.mzz,
                },
            ))
        })
        .collect()
}
