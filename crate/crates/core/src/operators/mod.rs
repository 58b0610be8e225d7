//! Matrix-free linear forward operators with adjoints.
//!
//! [`ForwardOperator`] is the contract consumed by the solver: apply the map
//! and apply its adjoint, with the adjoint taken with respect to the plain
//! Euclidean pairing of the grid module. [`DenseOperator`] is the explicit
//! matrix used for oracle tests; [`PatOperator`](pat::PatOperator) is the
//! subsampled circular-means tomography surrogate.

pub mod fbp;
pub mod pat;

pub use fbp::{fbp_reconstruct, FbpConfig, FbpFilter};
pub use pat::PatOperator;

use crate::error::{Error, Result};
use crate::grid::{Image, SeededRng, Sinogram};

/// Linear map from images to sinograms together with its exact adjoint.
pub trait ForwardOperator: Sync {
    /// Expected input shape as (height, width).
    fn image_shape(&self) -> (usize, usize);
    /// Output shape as (n_sensors, n_samples).
    fn sino_shape(&self) -> (usize, usize);

    fn apply(&self, x: &Image) -> Result<Sinogram>;
    fn adjoint(&self, y: &Sinogram) -> Result<Image>;

    /// Adjoint of the derivative at `x`. For the linear maps implemented
    /// here this is the plain adjoint; the iterate is passed through so a
    /// nonlinear operator can linearize at the current point.
    fn adjoint_at(&self, _x: &Image, y: &Sinogram) -> Result<Image> {
        self.adjoint(y)
    }
}

/// Explicit row-major matrix acting on flattened images.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseOperator {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "operator dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::shape(
                format!("{} entries", rows * cols),
                format!("{}", entries.len()),
            ));
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(DenseOperator {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        DenseOperator {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Square matrix with prescribed singular values and seeded random
    /// orthogonal factors.
    pub fn with_spectrum(spectrum: &[f64], rng: &mut SeededRng) -> Self {
        let n = spectrum.len();
        DenseOperator {
            rows: n,
            cols: n,
            entries: crate::linalg::matrix_with_spectrum(spectrum, rng),
        }
    }

    /// Seeded matrix with iid standard normal entries.
    pub fn random_gaussian(rows: usize, cols: usize, rng: &mut SeededRng) -> Self {
        DenseOperator {
            rows,
            cols,
            entries: rng.normal_vec(rows * cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Matrix-vector product on flat vectors.
    pub fn apply_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::shape(
                format!("vector of length {}", self.cols),
                format!("{}", x.len()),
            ));
        }
        Ok(crate::linalg::matvec(&self.entries, self.rows, self.cols, x))
    }

    /// Transpose-vector product on flat vectors.
    pub fn adjoint_vec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::shape(
                format!("vector of length {}", self.rows),
                format!("{}", y.len()),
            ));
        }
        Ok(crate::linalg::matvec_t(
            &self.entries,
            self.rows,
            self.cols,
            y,
        ))
    }

    /// `AᵀA + 2αI`, row-major, for the quadratic oracle.
    pub fn gram_plus_ridge(&self, two_alpha: f64) -> Vec<f64> {
        let (m, n) = (self.rows, self.cols);
        let mut g = vec![0.0; n * n];
        for k in 0..m {
            let row = &self.entries[k * n..(k + 1) * n];
            for i in 0..n {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for j in 0..n {
                    g[i * n + j] += ri * row[j];
                }
            }
        }
        for i in 0..n {
            g[i * n + i] += two_alpha;
        }
        g
    }
}

impl ForwardOperator for DenseOperator {
    fn image_shape(&self) -> (usize, usize) {
        (1, self.cols)
    }

    fn sino_shape(&self) -> (usize, usize) {
        (self.rows, 1)
    }

    fn apply(&self, x: &Image) -> Result<Sinogram> {
        let v = self.apply_vec(x.values())?;
        Ok(Sinogram::new(self.rows, 1, v)?)
    }

    fn adjoint(&self, y: &Sinogram) -> Result<Image> {
        let v = self.adjoint_vec(y.values())?;
        Ok(Image::new(self.cols, 1, v)?)
    }
}

/// Power-iteration estimate of `‖FᵀF‖` (the squared largest singular value).
///
/// Deterministic given the seed; used to scale solver step sizes.
pub fn operator_norm_sq_estimate<O: ForwardOperator + ?Sized>(
    op: &O,
    n_iters: usize,
    seed: u64,
) -> Result<f64> {
    let (h, w) = op.image_shape();
    let mut rng = SeededRng::new(seed);
    let mut v = Image::new(w, h, rng.normal_vec(w * h))?;
    let norm = v.norm2();
    if norm == 0.0 {
        return Err(Error::ZeroNorm("power iteration start vector"));
    }
    v = v.scaled(1.0 / norm);
    let mut lambda = 0.0;
    for _ in 0..n_iters {
        let fv = op.apply(&v)?;
        let ftfv = op.adjoint(&fv)?;
        let norm = ftfv.norm2();
        if norm == 0.0 {
            return Ok(0.0);
        }
        lambda = v.inner_product(&ftfv)?;
        v = ftfv.scaled(1.0 / norm);
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_apply_hand_values() {
        let a = DenseOperator::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.apply_vec(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert_eq!(a.apply_vec(&[2.0, -1.0]).unwrap(), vec![0.0, 2.0]);

        let id = DenseOperator::identity(3);
        assert_eq!(
            id.apply_vec(&[0.5, -1.5, 2.0]).unwrap(),
            vec![0.5, -1.5, 2.0]
        );
    }

    #[test]
    fn dense_adjoint_hand_values() {
        let a = DenseOperator::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.adjoint_vec(&[1.0, 0.0]).unwrap(), vec![1.0, 2.0]);

        let id = DenseOperator::identity(2);
        assert_eq!(id.adjoint_vec(&[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn dense_dimension_mismatch_errors() {
        let a = DenseOperator::new(2, 3, vec![0.0; 6]).unwrap();
        assert!(a.apply_vec(&[1.0, 2.0]).is_err());
        assert!(a.adjoint_vec(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn adjoint_identity_on_random_instances() {
        let mut rng = SeededRng::new(1234);
        for _ in 0..50 {
            let m = 2 + rng.below(6);
            let n = 2 + rng.below(6);
            let a = DenseOperator::random_gaussian(m, n, &mut rng);
            let x = rng.normal_vec(n);
            let y = rng.normal_vec(m);
            let lhs = crate::grid::dot(&a.apply_vec(&x).unwrap(), &y);
            let rhs = crate::grid::dot(&x, &a.adjoint_vec(&y).unwrap());
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()),
                "lhs={lhs} rhs={rhs}"
            );
        }
    }

    #[test]
    fn power_iteration_matches_known_spectrum() {
        let mut rng = SeededRng::new(77);
        let op = DenseOperator::with_spectrum(&[2.0, 1.0, 0.5, 0.1], &mut rng);
        let est = operator_norm_sq_estimate(&op, 300, 1).unwrap();
        assert!((est - 4.0).abs() < 1e-6, "est={est}");
    }

    #[test]
    fn power_iteration_seed_stability() {
        let mut rng = SeededRng::new(78);
        let op = DenseOperator::random_gaussian(10, 10, &mut rng);
        let a = operator_norm_sq_estimate(&op, 400, 11).unwrap();
        let b = operator_norm_sq_estimate(&op, 400, 22).unwrap();
        assert!((a - b).abs() <= 1e-3 * a.abs(), "a={a} b={b}");
    }
}
