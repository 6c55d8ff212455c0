//! Random state generators and independent oracles shared by the
//! integration tests. Nothing here calls into the code under test except
//! for the plain data types.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use qcmm::eigen::{self, Matrix4};
use qcmm::{D7Params, DensityMatrix4, FanoParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    match k {
        0 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        1 => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        2 => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        3 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => unreachable!(),
    }
}

pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Matrix4 {
    let mut out = eigen::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn trace(m: &Matrix4) -> Complex64 {
    (0..4).map(|i| m[i][i]).sum()
}

/// `¼ Σ c_ab σ_a ⊗ σ_b` by explicit Kronecker products.
pub fn fano_by_kron(f: &FanoParams) -> Matrix4 {
    let mut coeff = [[0.0; 4]; 4];
    coeff[0][0] = 1.0;
    for i in 0..3 {
        coeff[i + 1][0] = f.p1[i];
        coeff[0][i + 1] = f.p2[i];
        for j in 0..3 {
            coeff[i + 1][j + 1] = f.m[i][j];
        }
    }
    let mut out = eigen::zero();
    for a in 0..4 {
        for b in 0..4 {
            let k = kron(&pauli(a), &pauli(b));
            for r in 0..4 {
                for s in 0..4 {
                    out[r][s] += k[r][s] * (0.25 * coeff[a][b]);
                }
            }
        }
    }
    out
}

/// `Tr(ρ σ_a ⊗ σ_b)` by matrix multiplication.
pub fn pauli_trace(rho: &DensityMatrix4, a: usize, b: usize) -> f64 {
    trace(&eigen::mat_mul(rho.entries(), &kron(&pauli(a), &pauli(b)))).re
}

pub fn fano_by_traces(rho: &DensityMatrix4) -> FanoParams {
    FanoParams {
        p1: std::array::from_fn(|i| pauli_trace(rho, i + 1, 0)),
        p2: std::array::from_fn(|i| pauli_trace(rho, 0, i + 1)),
        m: std::array::from_fn(|i| std::array::from_fn(|j| pauli_trace(rho, i + 1, j + 1))),
    }
}

/// Partial transpose on qubit 2 via the 1-based swap list
/// ρ12⇄ρ21, ρ14⇄ρ23, ρ32⇄ρ41, ρ34⇄ρ43.
pub fn pt_by_swap_list(rho: &DensityMatrix4) -> DensityMatrix4 {
    let mut m = *rho.entries();
    let swaps = [((1, 2), (2, 1)), ((1, 4), (2, 3)), ((3, 2), (4, 1)), ((3, 4), (4, 3))];
    for ((a, b), (x, y)) in swaps {
        let tmp = m[a - 1][b - 1];
        m[a - 1][b - 1] = m[x - 1][y - 1];
        m[x - 1][y - 1] = tmp;
    }
    DensityMatrix4::from_entries(m)
}

pub fn max_abs_diff(a: &Matrix4, b: &Matrix4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

fn normal(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// `G Gᴴ / Tr` for a complex Gaussian `G`: full-rank mixed states.
pub fn random_state(rng: &mut impl Rng) -> DensityMatrix4 {
    let g: Matrix4 =
        std::array::from_fn(|_| std::array::from_fn(|_| c(normal(rng), normal(rng))));
    let mut m = eigen::mat_mul(&g, &eigen::adjoint(&g));
    let tr = trace(&m).re;
    for row in m.iter_mut() {
        for z in row.iter_mut() {
            *z /= tr;
        }
    }
    DensityMatrix4::from_entries(m)
}

pub fn random_pure_amplitudes(rng: &mut impl Rng) -> [Complex64; 4] {
    let v: [Complex64; 4] = std::array::from_fn(|_| c(normal(rng), normal(rng)));
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / n)
}

/// `2 |ψ₀₀ ψ₁₁ − ψ₀₁ ψ₁₀|` for a normalized pure state.
pub fn concurrence(psi: &[Complex64; 4]) -> f64 {
    2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()
}

pub fn random_bloch(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

/// `(1 + σ⃗·P⃗)/2` written out by hand.
pub fn qubit_from_bloch(p: [f64; 3]) -> [[Complex64; 2]; 2] {
    [
        [c(0.5 * (1.0 + p[2]), 0.0), c(0.5 * p[0], -0.5 * p[1])],
        [c(0.5 * p[0], 0.5 * p[1]), c(0.5 * (1.0 - p[2]), 0.0)],
    ]
}

/// Convex mixture of 1..=8 random product states.
pub fn random_separable(rng: &mut impl Rng) -> DensityMatrix4 {
    let k = rng.gen_range(1..=8);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = eigen::zero();
    for w in weights {
        let a = qubit_from_bloch(random_bloch(rng));
        let b = qubit_from_bloch(random_bloch(rng));
        let prod = kron(&a, &b);
        for r in 0..4 {
            for s in 0..4 {
                m[r][s] += prod[r][s] * (w / total);
            }
        }
    }
    DensityMatrix4::from_entries(m)
}

/// Rejection sample from the cube until the composed matrix is PSD,
/// judged by the numeric eigensolver.
pub fn random_valid_d7(rng: &mut impl Rng, half_width: f64) -> D7Params {
    loop {
        let d = D7Params::from_array(std::array::from_fn(|_| {
            rng.gen_range(-half_width..=half_width)
        }));
        let min = eigen::hermitian_eigen(d.to_fano().to_matrix().entries()).values[3];
        if min >= 0.0 {
            return d;
        }
    }
}

pub fn random_small_fano(rng: &mut impl Rng) -> FanoParams {
    FanoParams {
        p1: std::array::from_fn(|_| rng.gen_range(-0.1..0.1)),
        p2: std::array::from_fn(|_| rng.gen_range(-0.1..0.1)),
        m: std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-0.1..0.1))),
    }
}

pub fn bew_closed(x: f64) -> [f64; 4] {
    [
        (1.0 - x) * (1.0 + 3.0 * x) / 4.0,
        ((1.0 - x) / 2.0).powi(2),
        ((1.0 + x) / 2.0).powi(2),
        (x + 1.0) * (1.0 - 3.0 * x) / 4.0,
    ]
}
