//! Minimal dense linear algebra for small test instances and oracles.
//!
//! Everything here is for desk-scale matrices (tens of rows); no pivots,
//! no blocking.

use crate::error::{Error, Result};
use crate::grid::SeededRng;

/// Cholesky solve of a symmetric positive definite system `A x = b`.
///
/// `a` is row-major `n x n`. Fails on a non-positive pivot.
pub fn cholesky_solve(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::shape(format!("{n}x{n} matrix"), format!("{}", a.len())));
    }
    // Lower-triangular factor L with A = L Lᵀ.
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::SingularSystem("non-positive Cholesky pivot"));
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    // Forward substitution L z = b.
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * z[k];
        }
        z[i] = sum / l[i * n + i];
    }
    // Back substitution Lᵀ x = z.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = z[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Ok(x)
}

/// Row-major matrix-vector product.
pub fn matvec(a: &[f64], rows: usize, cols: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(x.len(), cols);
    (0..rows)
        .map(|i| crate::grid::dot(&a[i * cols..(i + 1) * cols], x))
        .collect()
}

/// Transpose-vector product `Aᵀ y`.
pub fn matvec_t(a: &[f64], rows: usize, cols: usize, y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(y.len(), rows);
    let mut out = vec![0.0; cols];
    for i in 0..rows {
        let yi = y[i];
        for j in 0..cols {
            out[j] += a[i * cols + j] * yi;
        }
    }
    out
}

/// Seeded random orthogonal matrix via modified Gram-Schmidt on a Gaussian
/// matrix. Returned row-major `n x n`.
pub fn random_orthogonal(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    let mut q = rng.normal_vec(n * n);
    // Orthonormalize columns.
    for j in 0..n {
        for k in 0..j {
            let mut proj = 0.0;
            for i in 0..n {
                proj += q[i * n + j] * q[i * n + k];
            }
            for i in 0..n {
                q[i * n + j] -= proj * q[i * n + k];
            }
        }
        let mut norm = 0.0;
        for i in 0..n {
            norm += q[i * n + j] * q[i * n + j];
        }
        let norm = norm.sqrt();
        // A Gaussian matrix is full rank outside a null set; a degenerate
        // column would only arise from a catastrophically unlucky seed.
        assert!(norm > 1e-12, "degenerate Gram-Schmidt column");
        for i in 0..n {
            q[i * n + j] /= norm;
        }
    }
    q
}

/// Builds `U diag(s) Vᵀ` with seeded orthogonal `U`, `V`, row-major output.
pub fn matrix_with_spectrum(spectrum: &[f64], rng: &mut SeededRng) -> Vec<f64> {
    let n = spectrum.len();
    let u = random_orthogonal(n, rng);
    let v = random_orthogonal(n, rng);
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                sum += u[i * n + k] * spectrum[k] * v[j * n + k];
            }
            out[i * n + j] = sum;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        // A = [[4,2],[2,3]], b = [8, 7] -> x = [1.4, 1.4]? Check: 4*1.4+2*1.4=8.4.
        // Solve by hand instead: x = A^{-1} b, det = 8, A^{-1} = [[3,-2],[-2,4]]/8
        // x = [(3*8 - 2*7)/8, (-2*8 + 4*7)/8] = [10/8, 12/8] = [1.25, 1.5].
        let x = cholesky_solve(&[4.0, 2.0, 2.0, 3.0], &[8.0, 7.0]).unwrap();
        assert!((x[0] - 1.25).abs() < 1e-12);
        assert!((x[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(cholesky_solve(&[1.0, 2.0, 2.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn orthogonal_matrix_is_orthogonal() {
        let mut rng = SeededRng::new(5);
        let n = 12;
        let q = random_orthogonal(n, &mut rng);
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += q[k * n + i] * q[k * n + j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10, "col {i}.col {j} = {dot}");
            }
        }
    }

    #[test]
    fn spectrum_matrix_has_requested_singular_values() {
        let mut rng = SeededRng::new(8);
        let spectrum = [3.0, 2.0, 1.0, 0.5];
        let a = matrix_with_spectrum(&spectrum, &mut rng);
        // Largest singular value via power iteration on AᵀA.
        let n = 4;
        let mut v = rng.normal_vec(n);
        for _ in 0..500 {
            let av = matvec(&a, n, n, &v);
            let atav = matvec_t(&a, n, n, &av);
            let norm = crate::grid::norm2(&atav);
            v = atav.iter().map(|x| x / norm).collect();
        }
        let av = matvec(&a, n, n, &v);
        let sigma_max = crate::grid::norm2(&av);
        assert!((sigma_max - 3.0).abs() < 1e-6, "sigma_max={sigma_max}");
    }
}
