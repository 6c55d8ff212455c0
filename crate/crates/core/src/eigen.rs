//! Cyclic Jacobi eigensolver for 4×4 complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` and then
//! applies the real two-sided Jacobi rotation, so the unitary acting on the
//! `(p, q)` plane is `D R Dᴴ` with `D = diag(1, conj(e))`, `e = a[p][q] / |a[p][q]|`.

use num_complex::Complex64;

pub type Matrix4 = [[Complex64; 4]; 4];

const MAX_SWEEPS: usize = 64;

/// Eigenvalues sorted descending; `vectors[i][k]` is component `i` of eigenvector `k`.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: Matrix4,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> [Complex64; 4] {
        std::array::from_fn(|i| self.vectors[i][k])
    }

    /// Largest `‖A v − λ v‖₂` over the four eigenpairs.
    pub fn max_residual(&self, a: &Matrix4) -> f64 {
        (0..4)
            .map(|k| {
                let v = self.vector(k);
                let av = mat_vec(a, &v);
                av.iter()
                    .zip(v.iter())
                    .map(|(x, y)| (x - y * self.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub fn zero() -> Matrix4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn identity() -> Matrix4 {
    let mut m = zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec(a: &Matrix4, v: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|k| a[i][k] * v[k]).sum())
}

pub fn adjoint(a: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

/// `max |a[i][j] − conj(a[j][i])|`.
pub fn hermiticity_residual(a: &Matrix4) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in i..4 {
            r = r.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    r
}

fn off_diagonal_norm_sqr(a: &Matrix4) -> f64 {
    let mut s = 0.0;
    for p in 0..4 {
        for q in (p + 1)..4 {
            s += a[p][q].norm_sqr();
        }
    }
    2.0 * s
}

/// Diagonalizes the Hermitian part `(A + Aᴴ)/2` of `a`.
pub fn hermitian_eigen(a: &Matrix4) -> HermitianEigen {
    let mut m: Matrix4 =
        std::array::from_fn(|i| std::array::from_fn(|j| (a[i][j] + a[j][i].conj()) * 0.5));
    let mut v = identity();

    let frob_sqr: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let stop = (f64::EPSILON * f64::EPSILON) * frob_sqr;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&m) <= stop {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| m[j][j].re.total_cmp(&m[i][i].re));
    let values = order.map(|k| m[k][k].re);
    let vectors = std::array::from_fn(|i| std::array::from_fn(|k| v[i][order[k]]));
    HermitianEigen { values, vectors }
}

fn rotate(m: &mut Matrix4, v: &mut Matrix4, p: usize, q: usize) {
    let r = m[p][q].norm();
    if r == 0.0 {
        return;
    }
    let e = m[p][q] / r;
    let theta = (m[q][q].re - m[p][p].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let mut u = identity();
    u[p][p] = Complex64::new(c, 0.0);
    u[q][q] = Complex64::new(c, 0.0);
    u[p][q] = e * s;
    u[q][p] = -e.conj() * s;

    *m = mat_mul(&adjoint(&u), &mat_mul(m, &u));
    m[p][q] = Complex64::new(0.0, 0.0);
    m[q][p] = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        m[i][i].im = 0.0;
    }
    *v = mat_mul(v, &u);
}
