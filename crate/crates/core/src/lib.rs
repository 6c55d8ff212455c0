//! Geometry of two-qubit entanglement in a compact (3+1)-dimensional
//! Minkowski manifold.
//!
//! States with z-aligned polarizations and a correlation matrix that is
//! block diagonal in (x, y) ⊕ z are described by seven parameters. Their
//! eigenvalues, and those of their partial transpose, factor into two
//! branches, each an interval `t² − |X|²` of a pseudo space-time point.
//! A negative transposed interval means the state is entangled.
//!
//! - [`state`]: density matrices, Fano decomposition, the seven-parameter class.
//! - [`ppt`]: partial transposition, spectra, the Peres–Horodecki verdict.
//! - [`cmm`]: manifold coordinates, quadridistances, geometric regions.
//! - [`kinematics`]: velocities, speeds and quadrispeeds along a family.
//! - [`models`] and [`trajectory`]: the Werner-type family, tabulated
//!   families, sweeps and crossing detection.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cmm;
pub mod eigen;
pub mod error;
pub mod kinematics;
pub mod models;
pub mod ppt;
pub mod state;
pub mod trajectory;

pub use cmm::{
    coords_from_d7, invariance_residual, lightcone_reference, pt_coords, quad_distances,
    region_of, CmmCoords, PtDriver, QuadDistances, RegionLabel,
};
pub use error::{Error, Result};
pub use kinematics::{
    coordinate_derivatives, quadrispeed_sq, sample_kinematics, speed, velocity, Branch,
    DiffOptions, KinematicSample, ParametricD7Model,
};
pub use models::{bew_d7, bew_x_of_t, load_tabulated, BewMode, BewModel, BewSpec, Interpolation};
pub use ppt::{
    classify_phc, d7_eigenvalues, d7_pt_eigenvalues, eigenvalues_hermitian4, partial_transpose,
    reflect_fano, PhcVerdict, Region, Spectrum4,
};
pub use state::{
    compose_d7, compose_from_fano, decompose_to_fano, project_d7, reduce_qubit,
    validate_density, D7Params, DensityMatrix4, FanoParams, Qubit, Qubit2x2, ValidationReport,
};
pub use trajectory::{
    find_crossings, trace_trajectory, CrossingEvent, CrossingKind, CrossingScan, TraceOptions,
    TrajectoryPoint,
};

/// Default tolerance for invariant checks and for the light-like band.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for algebraic roundtrips.
pub const ROUNDTRIP_TOL: f64 = 1e-12;
