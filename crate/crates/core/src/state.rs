//! Two-qubit density matrices, their Fano decomposition and the
//! seven-parameter class with z-aligned polarizations.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with qubit 1 as the left tensor
//! factor, so `entries[2 * a + b][2 * c + d] = ⟨a b| ρ |c d⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{self, Matrix4};
use crate::error::{Error, OffPattern, Result};
use crate::DEFAULT_TOL;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    entries: Matrix4,
}

impl DensityMatrix4 {
    /// Wraps raw entries. No invariant is checked here; see [`validate_density`].
    pub fn from_entries(entries: Matrix4) -> Self {
        Self { entries }
    }

    pub fn maximally_mixed() -> Self {
        let mut m = eigen::zero();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new(0.25, 0.0);
        }
        Self { entries: m }
    }

    /// `|ψ⟩⟨ψ|` for an amplitude vector; the vector is normalized first.
    pub fn from_pure(psi: [Complex64; 4]) -> Self {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = psi.map(|z| z / norm);
        Self {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| psi[i] * psi[j].conj())),
        }
    }

    pub fn entries(&self) -> &Matrix4 {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        eigen::hermiticity_residual(&self.entries)
    }

    /// `Tr ρ²`, real part.
    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += (self.entries[i][j] * self.entries[j][i]).re;
            }
        }
        s
    }

    /// Convex combination `Σ wₖ ρₖ`.
    pub fn mixture(parts: &[(f64, DensityMatrix4)]) -> Self {
        let mut m = eigen::zero();
        for (w, rho) in parts {
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += rho.entries[i][j] * *w;
                }
            }
        }
        Self { entries: m }
    }

    /// Kronecker product `a ⊗ b` of two single-qubit states.
    pub fn product(a: &Qubit2x2, b: &Qubit2x2) -> Self {
        Self {
            entries: std::array::from_fn(|r| {
                std::array::from_fn(|c| a.entries[r / 2][c / 2] * b.entries[r % 2][c % 2])
            }),
        }
    }

    /// Hermitian with unit trace, the precondition of the decomposition paths.
    pub(crate) fn check_structure(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_residual();
        if !(herm <= tol) {
            return Err(Error::InvalidState(format!(
                "hermiticity residual {herm:e} exceeds {tol:e}"
            )));
        }
        let dev = (self.trace() - 1.0).norm();
        if !(dev <= tol) {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {dev:e}"
            )));
        }
        Ok(())
    }

    pub(crate) fn check_valid(&self, tol: f64) -> Result<()> {
        let report = validate_density(self, tol);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidState(report.failure_summary()))
        }
    }
}

/// Single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit2x2 {
    pub entries: [[Complex64; 2]; 2],
}

impl Qubit2x2 {
    /// `(1 + σ⃗·P⃗)/2`.
    pub fn from_bloch(p: [f64; 3]) -> Self {
        let c = Complex64::new;
        Self {
            entries: [
                [c(0.5 * (1.0 + p[2]), 0.0), c(0.5 * p[0], -0.5 * p[1])],
                [c(0.5 * p[0], 0.5 * p[1]), c(0.5 * (1.0 - p[2]), 0.0)],
            ],
        }
    }

    pub fn max_abs_diff(&self, other: &Qubit2x2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        d
    }
}

/// Polarization vectors and correlation matrix of the Fano form
/// `ρ = ¼ (1 + P⃗₁·σ⃗⊗1 + 1⊗P⃗₂·σ⃗ + Σᵢⱼ Mᵢⱼ σᵢ⊗σⱼ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanoParams {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    pub m: [[f64; 3]; 3],
}

impl FanoParams {
    pub fn is_finite(&self) -> bool {
        self.p1
            .iter()
            .chain(self.p2.iter())
            .chain(self.m.iter().flatten())
            .all(|v| v.is_finite())
    }

    pub fn max_abs_diff(&self, other: &FanoParams) -> f64 {
        let a = self.p1.iter().chain(&self.p2).chain(self.m.iter().flatten());
        let b = other.p1.iter().chain(&other.p2).chain(other.m.iter().flatten());
        a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Matrix entries of the Fano form, without any positivity check.
    pub fn to_matrix(&self) -> DensityMatrix4 {
        let [p1x, p1y, p1z] = self.p1;
        let [p2x, p2y, p2z] = self.p2;
        let [[mxx, mxy, mxz], [myx, myy, myz], [mzx, mzy, mzz]] = self.m;
        let c = |re: f64, im: f64| Complex64::new(0.25 * re, 0.25 * im);

        let mut e = eigen::zero();
        e[0][0] = c(1.0 + p1z + p2z + mzz, 0.0);
        e[1][1] = c(1.0 + p1z - p2z - mzz, 0.0);
        e[2][2] = c(1.0 - p1z + p2z - mzz, 0.0);
        e[3][3] = c(1.0 - p1z - p2z + mzz, 0.0);
        e[0][1] = c(p2x + mzx, -(p2y + mzy));
        e[2][3] = c(p2x - mzx, -(p2y - mzy));
        e[0][2] = c(p1x + mxz, -(p1y + myz));
        e[1][3] = c(p1x - mxz, -(p1y - myz));
        e[0][3] = c(mxx - myy, -(mxy + myx));
        e[1][2] = c(mxx + myy, mxy - myx);
        for i in 0..4 {
            for j in 0..i {
                e[i][j] = e[j][i].conj();
            }
        }
        DensityMatrix4::from_entries(e)
    }
}

/// The seven free parameters of the class with z-aligned polarizations and
/// a correlation matrix that is block diagonal in (x, y) ⊕ z.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D7Params {
    pub p1z: f64,
    pub p2z: f64,
    pub mxx: f64,
    pub myy: f64,
    pub mxy: f64,
    pub myx: f64,
    pub mzz: f64,
}

impl D7Params {
    pub const NAMES: [&'static str; 7] = ["p1z", "p2z", "mxx", "myy", "mxy", "myx", "mzz"];

    pub fn from_array(a: [f64; 7]) -> Self {
        let [p1z, p2z, mxx, myy, mxy, myx, mzz] = a;
        Self { p1z, p2z, mxx, myy, mxy, myx, mzz }
    }

    pub fn to_array(&self) -> [f64; 7] {
        [self.p1z, self.p2z, self.mxx, self.myy, self.mxy, self.myx, self.mzz]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn in_unit_cube(&self) -> bool {
        self.to_array().iter().all(|v| (-1.0..=1.0).contains(v))
    }

    /// Zero-padded Fano parameters.
    pub fn to_fano(&self) -> FanoParams {
        FanoParams {
            p1: [0.0, 0.0, self.p1z],
            p2: [0.0, 0.0, self.p2z],
            m: [
                [self.mxx, self.mxy, 0.0],
                [self.myx, self.myy, 0.0],
                [0.0, 0.0, self.mzz],
            ],
        }
    }
}

/// Builds the density matrix of `f` and rejects it if it is not positive
/// semidefinite within the default tolerance.
pub fn compose_from_fano(f: &FanoParams) -> Result<DensityMatrix4> {
    compose_from_fano_with_tol(f, DEFAULT_TOL)
}

pub fn compose_from_fano_with_tol(f: &FanoParams, tol: f64) -> Result<DensityMatrix4> {
    if !f.is_finite() {
        return Err(Error::InvalidState("non-finite Fano parameter".into()));
    }
    let rho = f.to_matrix();
    let min_eigenvalue = eigen::hermitian_eigen(rho.entries()).values[3];
    if min_eigenvalue < -tol {
        return Err(Error::NonPositive { min_eigenvalue, tol });
    }
    Ok(rho)
}

/// Polarization vectors and correlation matrix read off the matrix entries.
///
/// Requires a Hermitian unit-trace matrix; positivity is not required so
/// boundary and non-physical points of a trajectory can still be decomposed.
pub fn decompose_to_fano(rho: &DensityMatrix4) -> Result<FanoParams> {
    rho.check_structure(DEFAULT_TOL)?;
    let r = rho.entries();
    let d = |i: usize| r[i][i].re;

    let p1 = [
        2.0 * (r[0][2] + r[1][3]).re,
        -2.0 * (r[0][2] + r[1][3]).im,
        d(0) + d(1) - d(2) - d(3),
    ];
    let p2 = [
        2.0 * (r[0][1] + r[2][3]).re,
        -2.0 * (r[0][1] + r[2][3]).im,
        d(0) - d(1) + d(2) - d(3),
    ];
    let m = [
        [
            2.0 * (r[0][3] + r[1][2]).re,
            2.0 * (r[1][2] - r[0][3]).im,
            2.0 * (r[0][2] - r[1][3]).re,
        ],
        [
            -2.0 * (r[0][3] + r[1][2]).im,
            2.0 * (r[1][2] - r[0][3]).re,
            -2.0 * (r[0][2] - r[1][3]).im,
        ],
        [
            2.0 * (r[0][1] - r[2][3]).re,
            -2.0 * (r[0][1] - r[2][3]).im,
            d(0) - d(1) - d(2) + d(3),
        ],
    ];
    Ok(FanoParams { p1, p2, m })
}

/// Partial trace over the other qubit.
pub fn reduce_qubit(rho: &DensityMatrix4, which: Qubit) -> Result<Qubit2x2> {
    rho.check_valid(DEFAULT_TOL)?;
    let r = rho.entries();
    let entries = std::array::from_fn(|a| {
        std::array::from_fn(|b| match which {
            Qubit::First => r[2 * a][2 * b] + r[2 * a + 1][2 * b + 1],
            Qubit::Second => r[a][b] + r[2 + a][2 + b],
        })
    });
    Ok(Qubit2x2 { entries })
}

/// Keeps the seven parameters of the z-aligned class, provided every
/// off-pattern entry is at most `tol` in magnitude.
pub fn project_d7(f: &FanoParams, tol: f64) -> Result<D7Params> {
    let off = [
        ("p1x", f.p1[0]),
        ("p1y", f.p1[1]),
        ("p2x", f.p2[0]),
        ("p2y", f.p2[1]),
        ("mxz", f.m[0][2]),
        ("myz", f.m[1][2]),
        ("mzx", f.m[2][0]),
        ("mzy", f.m[2][1]),
    ];
    let offending: Vec<OffPattern> = off
        .iter()
        .filter(|(_, v)| !(v.abs() <= tol))
        .map(|&(name, value)| OffPattern { name, value })
        .collect();
    if !offending.is_empty() {
        return Err(Error::NotD7Class(offending));
    }
    Ok(D7Params {
        p1z: f.p1[2],
        p2z: f.p2[2],
        mxx: f.m[0][0],
        myy: f.m[1][1],
        mxy: f.m[0][1],
        myx: f.m[1][0],
        mzz: f.m[2][2],
    })
}

pub fn compose_d7(d: &D7Params) -> Result<DensityMatrix4> {
    compose_from_fano(&d.to_fano())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive_semidefinite: bool,
    pub purity_bounded: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive_semidefinite && self.purity_bounded
    }

    pub fn failure_summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.hermitian {
            parts.push(format!("hermiticity residual {:e}", self.hermiticity_residual));
        }
        if !self.unit_trace {
            parts.push(format!("trace deviation {:e}", self.trace_deviation));
        }
        if !self.positive_semidefinite {
            parts.push(format!("min eigenvalue {:e}", self.min_eigenvalue));
        }
        if !self.purity_bounded {
            parts.push(format!("purity {}", self.purity));
        }
        parts.join(", ")
    }
}

/// Checks every density-matrix invariant and reports residuals. Eigenvalues
/// are taken from the Hermitian part so the report is defined for any input.
pub fn validate_density(rho: &DensityMatrix4, tol: f64) -> ValidationReport {
    let hermiticity_residual = rho.hermiticity_residual();
    let trace_deviation = (rho.trace() - 1.0).norm();
    let min_eigenvalue = eigen::hermitian_eigen(rho.entries()).values[3];
    let purity = rho.purity();
    ValidationReport {
        tolerance: tol,
        hermiticity_residual,
        trace_deviation,
        min_eigenvalue,
        purity,
        hermitian: hermiticity_residual <= tol,
        unit_trace: trace_deviation <= tol,
        positive_semidefinite: min_eigenvalue >= -tol,
        purity_bounded: purity <= 1.0 + tol,
    }
}

/// `Tr(ρ σₐ ⊗ σ_b)` with `σ₀ = 1` and `σ₁,₂,₃ = σx, σy, σz`.
pub fn pauli_expectation(rho: &DensityMatrix4, a: usize, b: usize) -> f64 {
    let pa = pauli(a);
    let pb = pauli(b);
    let r = rho.entries();
    let mut s = Complex64::new(0.0, 0.0);
    for row in 0..4 {
        for col in 0..4 {
            let op = pa[col / 2][row / 2] * pb[col % 2][row % 2];
            s += r[row][col] * op;
        }
    }
    s.re
}

pub(crate) fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => [[one, z], [z, one]],
        1 => [[z, one], [one, z]],
        2 => [[z, -i], [i, z]],
        3 => [[one, z], [z, -one]],
        _ => panic!("Pauli index {k} out of range"),
    }
}
