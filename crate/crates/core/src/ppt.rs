//! Partial transposition, spectra, and the positive-partial-transpose test.

use serde::Serialize;

use crate::cmm::{coords_from_d7, pt_coords, CmmCoords};
use crate::eigen::{self, HermitianEigen};
use crate::error::{Error, Result};
use crate::state::{D7Params, DensityMatrix4, FanoParams, Qubit};
use crate::DEFAULT_TOL;

/// Classification shared by the spectral and the geometric test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    SeparableLike,
    EntangledLike,
    LightLike,
}

impl Region {
    /// Sign test with a symmetric band `[-tol, tol]` mapped to `LightLike`.
    pub fn from_indicator(value: f64, tol: f64) -> Self {
        if value < -tol {
            Region::EntangledLike
        } else if value.abs() <= tol {
            Region::LightLike
        } else {
            Region::SeparableLike
        }
    }

    pub fn code(self) -> char {
        match self {
            Region::SeparableLike => 'S',
            Region::EntangledLike => 'E',
            Region::LightLike => 'L',
        }
    }
}

/// Four eigenvalues, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum4 {
    pub values: [f64; 4],
}

impl Spectrum4 {
    pub fn from_unsorted(mut values: [f64; 4]) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn min(&self) -> f64 {
        self.values[3]
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum4) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Closed-form eigenvalues of a seven-parameter state, kept in branch order:
/// `branch1 = [(t₋+X₁)/2, (t₋−X₁)/2]`, `branch2 = [(t₊+X₂)/2, (t₊−X₂)/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchEigenvalues {
    pub branch1: [f64; 2],
    pub branch2: [f64; 2],
}

impl BranchEigenvalues {
    pub fn spectrum(&self) -> Spectrum4 {
        Spectrum4::from_unsorted([
            self.branch1[0],
            self.branch1[1],
            self.branch2[0],
            self.branch2[1],
        ])
    }

    fn from_coords(c: &CmmCoords) -> Self {
        let x1 = c.branch1_spatial_norm();
        let x2 = c.branch2_spatial_norm();
        Self {
            branch1: [0.5 * (c.t_minus + x1), 0.5 * (c.t_minus - x1)],
            branch2: [0.5 * (c.t_plus + x2), 0.5 * (c.t_plus - x2)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhcVerdict {
    pub label: Region,
    pub min_pt_eigenvalue: f64,
    pub tolerance_used: f64,
}

/// Transposes the indices of one qubit.
///
/// For the second qubit this swaps ρ₁₂⇄ρ₂₁, ρ₁₄⇄ρ₂₃, ρ₃₂⇄ρ₄₁ and ρ₃₄⇄ρ₄₃
/// (1-based). The output is Hermitian with the same trace but need not be
/// positive semidefinite.
pub fn partial_transpose(rho: &DensityMatrix4, qubit: Qubit) -> Result<DensityMatrix4> {
    rho.check_structure(DEFAULT_TOL)?;
    Ok(partial_transpose_unchecked(rho, qubit))
}

pub(crate) fn partial_transpose_unchecked(rho: &DensityMatrix4, qubit: Qubit) -> DensityMatrix4 {
    let r = rho.entries();
    DensityMatrix4::from_entries(std::array::from_fn(|row| {
        std::array::from_fn(|col| {
            let (a, b) = (row / 2, row % 2);
            let (c, d) = (col / 2, col % 2);
            match qubit {
                Qubit::Second => r[2 * a + d][2 * c + b],
                Qubit::First => r[2 * c + b][2 * a + d],
            }
        })
    }))
}

/// Reflection of the second Pauli vector across the x–z plane:
/// `P₂ᵧ → −P₂ᵧ` and `Mₖᵧ → −Mₖᵧ` for `k = x, y, z`.
pub fn reflect_fano(f: &FanoParams) -> FanoParams {
    let mut out = *f;
    out.p2[1] = -out.p2[1];
    for row in out.m.iter_mut() {
        row[1] = -row[1];
    }
    out
}

/// Numeric spectrum from the Jacobi eigensolver.
pub fn eigenvalues_hermitian4(rho: &DensityMatrix4) -> Result<Spectrum4> {
    Ok(Spectrum4 { values: eigen_decomposition(rho)?.values })
}

/// Full eigendecomposition, including eigenvectors.
pub fn eigen_decomposition(rho: &DensityMatrix4) -> Result<HermitianEigen> {
    let residual = rho.hermiticity_residual();
    if !(residual <= DEFAULT_TOL) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eigen::hermitian_eigen(rho.entries()))
}

pub fn d7_branch_eigenvalues(d: &D7Params) -> BranchEigenvalues {
    BranchEigenvalues::from_coords(&coords_from_d7(d))
}

pub fn d7_pt_branch_eigenvalues(d: &D7Params) -> BranchEigenvalues {
    BranchEigenvalues::from_coords(&pt_coords(&coords_from_d7(d)))
}

pub fn d7_eigenvalues(d: &D7Params) -> Spectrum4 {
    d7_branch_eigenvalues(d).spectrum()
}

pub fn d7_pt_eigenvalues(d: &D7Params) -> Spectrum4 {
    d7_pt_branch_eigenvalues(d).spectrum()
}

/// Peres–Horodecki test on the second-qubit partial transpose.
pub fn classify_phc(rho: &DensityMatrix4, tol: f64) -> Result<PhcVerdict> {
    rho.check_valid(tol)?;
    let pt = partial_transpose_unchecked(rho, Qubit::Second);
    let min_pt_eigenvalue = eigen::hermitian_eigen(pt.entries()).values[3];
    Ok(PhcVerdict {
        label: Region::from_indicator(min_pt_eigenvalue, tol),
        min_pt_eigenvalue,
        tolerance_used: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{compose_d7, compose_from_fano};

    fn bew(x: f64) -> D7Params {
        D7Params { mxx: -x, myy: -x, mzz: -x, ..Default::default() }
    }

    #[test]
    fn maximally_mixed_is_fixed_by_transposition() {
        let rho = DensityMatrix4::maximally_mixed();
        assert_eq!(partial_transpose(&rho, Qubit::Second).unwrap(), rho);
        assert_eq!(partial_transpose(&rho, Qubit::First).unwrap(), rho);
    }

    #[test]
    fn werner_transpose_moves_coherence_to_corners() {
        let x = 0.6;
        let pt = partial_transpose(&compose_d7(&bew(x)).unwrap(), Qubit::Second).unwrap();
        assert!((pt.get(0, 3).re + 2.0 * x / 4.0).abs() < 1e-15);
        assert!((pt.get(3, 0).re + 2.0 * x / 4.0).abs() < 1e-15);
        assert_eq!(pt.get(1, 2).norm(), 0.0);
        assert!((pt.get(1, 1).re - (1.0 + x) / 4.0).abs() < 1e-15);
        assert!((pt.get(0, 0).re - (1.0 - x) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn transposition_is_an_involution() {
        let rho = compose_d7(&D7Params::from_array([0.1, -0.2, 0.3, 0.1, 0.2, -0.1, 0.05])).unwrap();
        for q in [Qubit::First, Qubit::Second] {
            let twice = partial_transpose(&partial_transpose(&rho, q).unwrap(), q).unwrap();
            assert_eq!(twice, rho);
        }
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect_fano(&FanoParams::default()), FanoParams::default());
        let r = reflect_fano(&bew(0.4).to_fano());
        assert_eq!(r.m[1][1], 0.4);
        assert_eq!(r.m[0][0], -0.4);
        assert_eq!(r.m[2][2], -0.4);
    }

    #[test]
    fn numeric_spectra_of_werner_states() {
        let s = eigenvalues_hermitian4(&DensityMatrix4::maximally_mixed()).unwrap();
        assert_eq!(s.values, [0.25; 4]);

        let s = eigenvalues_hermitian4(&compose_d7(&bew(1.0)).unwrap()).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        assert!(s.max_abs_diff(&Spectrum4 { values: expected }) < 1e-12);

        let pt = partial_transpose(&compose_d7(&bew(1.0)).unwrap(), Qubit::Second).unwrap();
        let s = eigenvalues_hermitian4(&pt).unwrap();
        assert!(s.max_abs_diff(&Spectrum4 { values: [0.5, 0.5, 0.5, -0.5] }) < 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut e = *DensityMatrix4::maximally_mixed().entries();
        e[0][1].re = 0.1;
        assert!(matches!(
            eigenvalues_hermitian4(&DensityMatrix4::from_entries(e)),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn closed_form_werner_spectra() {
        let s = d7_eigenvalues(&bew(0.5));
        assert!(s.max_abs_diff(&Spectrum4 { values: [0.625, 0.125, 0.125, 0.125] }) < 1e-15);
        assert_eq!(d7_eigenvalues(&D7Params::default()).values, [0.25; 4]);
        assert_eq!(d7_pt_eigenvalues(&D7Params::default()).values, [0.25; 4]);

        assert!((d7_pt_eigenvalues(&bew(1.0)).min() + 0.5).abs() < 1e-15);
        assert!(d7_pt_eigenvalues(&bew(1.0 / 3.0)).min().abs() < 1e-16);
    }

    #[test]
    fn closed_form_matches_numeric_on_a_generic_point() {
        let d = D7Params::from_array([0.12, -0.05, 0.18, -0.11, 0.07, 0.15, -0.09]);
        let rho = compose_d7(&d).unwrap();
        let numeric = eigenvalues_hermitian4(&rho).unwrap();
        assert!(d7_eigenvalues(&d).max_abs_diff(&numeric) < 1e-12);
        let pt = partial_transpose(&rho, Qubit::Second).unwrap();
        let numeric = eigenvalues_hermitian4(&pt).unwrap();
        assert!(d7_pt_eigenvalues(&d).max_abs_diff(&numeric) < 1e-12);
    }

    #[test]
    fn phc_on_werner_states() {
        let v = classify_phc(&compose_d7(&bew(0.9)).unwrap(), 1e-9).unwrap();
        assert_eq!(v.label, Region::EntangledLike);
        assert!((v.min_pt_eigenvalue + 0.425).abs() < 1e-12);

        let v = classify_phc(&compose_d7(&bew(0.2)).unwrap(), 1e-9).unwrap();
        assert_eq!(v.label, Region::SeparableLike);
        assert!((v.min_pt_eigenvalue - 0.1).abs() < 1e-12);

        let v = classify_phc(&DensityMatrix4::maximally_mixed(), 1e-9).unwrap();
        assert_eq!(v.label, Region::SeparableLike);
        assert_eq!(v.min_pt_eigenvalue, 0.25);
    }

    #[test]
    fn phc_rejects_non_states() {
        let rho = bew(1.2).to_fano().to_matrix();
        assert!(matches!(classify_phc(&rho, 1e-9), Err(Error::InvalidState(_))));
        assert!(compose_from_fano(&bew(1.2).to_fano()).is_err());
    }
}
