//! Dense 2D grids, norms and the relative-error measure.
//!
//! Two concrete grid types are used throughout: [`Image`] for unknowns on the
//! physical domain [-1,1]² and [`Sinogram`] for measured data (one row per
//! sensor). Both store row-major `f64` values and are immutable value types:
//! every public operation returns a fresh grid, so sharing across threads is
//! safe.
//!
//! The inner product is the plain Euclidean pairing `Σᵢ aᵢbᵢ` without
//! grid-cell area weights; all operator adjoints in this crate are defined
//! relative to that pairing. Relative errors are scale-invariant to this
//! choice.

mod rng;

pub mod io;

pub use rng::SeededRng;

use crate::error::{Error, Result};

/// Real-valued image on the fixed physical domain [-1,1]².
///
/// `values[y * width + x]` is the pixel in row `y`, column `x`. Pixel centers
/// sit at `-1 + (i + 0.5) * 2/n` along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

/// Real-valued sensor-by-sample data grid.
///
/// `values[s * n_samples + k]` is sample `k` of sensor `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    n_sensors: usize,
    n_samples: usize,
    values: Vec<f64>,
}

impl Image {
    /// Builds an image, validating dimensions and finiteness.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::shape(
                format!("{} values", width * height),
                format!("{}", values.len()),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("image values"));
        }
        Ok(Image {
            width,
            height,
            values,
        })
    }

    /// All-zero image.
    pub fn zeros(width: usize, height: usize) -> Self {
        Image {
            width,
            height,
            values: vec![0.0; width.max(1) * height.max(1)],
        }
    }

    /// Constructor for internal paths that preserve finiteness structurally.
    pub(crate) fn from_raw(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Image {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// Physical coordinate of the pixel center in column `col` (x-axis) or
    /// row `row` (y-axis): `-1 + (i + 0.5) * 2/n`.
    pub fn pixel_center(index: usize, n: usize) -> f64 {
        -1.0 + (index as f64 + 0.5) * 2.0 / n as f64
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    fn shape_string(&self) -> String {
        format!("image {}x{}", self.width, self.height)
    }

    /// Euclidean pairing `Σᵢ aᵢbᵢ`.
    pub fn inner_product(&self, other: &Image) -> Result<f64> {
        if !self.same_shape(other) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        Ok(dot(&self.values, &other.values))
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.values)
    }

    /// `self + scale * other`, shape-checked.
    pub fn add_scaled(&self, scale: f64, other: &Image) -> Result<Image> {
        if !self.same_shape(other) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Image::from_raw(self.width, self.height, values))
    }

    pub fn scaled(&self, scale: f64) -> Image {
        Image::from_raw(
            self.width,
            self.height,
            self.values.iter().map(|v| v * scale).collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Sinogram {
    pub fn new(n_sensors: usize, n_samples: usize, values: Vec<f64>) -> Result<Self> {
        if n_sensors == 0 || n_samples == 0 {
            return Err(Error::InvalidArgument(format!(
                "sinogram dimensions must be positive, got {n_sensors}x{n_samples}"
            )));
        }
        if values.len() != n_sensors * n_samples {
            return Err(Error::shape(
                format!("{} values", n_sensors * n_samples),
                format!("{}", values.len()),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("sinogram values"));
        }
        Ok(Sinogram {
            n_sensors,
            n_samples,
            values,
        })
    }

    pub fn zeros(n_sensors: usize, n_samples: usize) -> Self {
        Sinogram {
            n_sensors,
            n_samples,
            values: vec![0.0; n_sensors.max(1) * n_samples.max(1)],
        }
    }

    pub(crate) fn from_raw(n_sensors: usize, n_samples: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n_sensors * n_samples);
        Sinogram {
            n_sensors,
            n_samples,
            values,
        }
    }

    pub fn n_sensors(&self) -> usize {
        self.n_sensors
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, sensor: usize, sample: usize) -> f64 {
        self.values[sensor * self.n_samples + sample]
    }

    pub fn same_shape(&self, other: &Sinogram) -> bool {
        self.n_sensors == other.n_sensors && self.n_samples == other.n_samples
    }

    fn shape_string(&self) -> String {
        format!("sinogram {}x{}", self.n_sensors, self.n_samples)
    }

    pub fn inner_product(&self, other: &Sinogram) -> Result<f64> {
        if !self.same_shape(other) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        Ok(dot(&self.values, &other.values))
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.values)
    }

    pub fn add_scaled(&self, scale: f64, other: &Sinogram) -> Result<Sinogram> {
        if !self.same_shape(other) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Sinogram::from_raw(self.n_sensors, self.n_samples, values))
    }

    pub fn scaled(&self, scale: f64) -> Sinogram {
        Sinogram::from_raw(
            self.n_sensors,
            self.n_samples,
            self.values.iter().map(|v| v * scale).collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Fixed-order dot product on flat slices (callers check lengths).
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm of a flat slice.
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Relative L² error `‖x − z‖₂ / ‖x‖₂` of a reconstruction `z` against the
/// reference `x`.
pub fn relative_error(x: &Image, z: &Image) -> Result<f64> {
    if !x.same_shape(z) {
        return Err(Error::shape(x.shape_string(), z.shape_string()));
    }
    let nx = x.norm2();
    if nx == 0.0 {
        return Err(Error::ZeroNorm("relative_error reference"));
    }
    let diff: f64 = x
        .values
        .iter()
        .zip(&z.values)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(diff.sqrt() / nx)
}
