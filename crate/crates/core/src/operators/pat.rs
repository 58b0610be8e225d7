//! Subsampled circular-means tomography operator.
//!
//! Sensors sit equispaced on the unit circle; each measurement is the mean
//! of the image over the circle of radius `r_k` centered at the sensor,
//! computed with `n_arc` equispaced arc points and bilinear interpolation
//! (the image is extended by zero outside the grid). Restricting the rows
//! to a sensor subset models spatial under-sampling; the adjoint is the
//! exact transpose of the interpolation/quadrature weights, so subsampled
//! adjoints zero-fill the missing sensors.

use std::fmt::Write as _;

use super::ForwardOperator;
use crate::error::{Error, Result};
use crate::grid::{Image, Sinogram};

/// Circular-means forward map `x -> (mean over circle(sensor_s, r_k))`.
#[derive(Debug, Clone)]
pub struct PatOperator {
    grid_n: usize,
    n_sensors_full: usize,
    n_radii: usize,
    r_max: f64,
    sensor_subset: Vec<usize>,
    n_arc: usize,
}

impl PatOperator {
    /// Full description. `sensor_subset` must be strictly increasing within
    /// `[0, n_sensors_full)`.
    pub fn new(
        grid_n: usize,
        n_sensors_full: usize,
        n_radii: usize,
        r_max: f64,
        sensor_subset: Vec<usize>,
        n_arc: usize,
    ) -> Result<Self> {
        if grid_n < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid_n must be >= 8, got {grid_n}"
            )));
        }
        if n_radii < 2 {
            return Err(Error::InvalidArgument(format!(
                "n_radii must be >= 2, got {n_radii}"
            )));
        }
        if n_sensors_full == 0 {
            return Err(Error::InvalidArgument("n_sensors_full must be positive".into()));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
        }
        if n_arc < 8 {
            return Err(Error::InvalidArgument(format!("n_arc must be >= 8, got {n_arc}")));
        }
        if sensor_subset.is_empty() {
            return Err(Error::InvalidArgument("sensor_subset must be nonempty".into()));
        }
        for w in sensor_subset.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidArgument(
                    "sensor_subset must be strictly increasing".into(),
                ));
            }
        }
        if *sensor_subset.last().unwrap() >= n_sensors_full {
            return Err(Error::InvalidArgument(format!(
                "sensor index {} out of range 0..{}",
                sensor_subset.last().unwrap(),
                n_sensors_full
            )));
        }
        Ok(PatOperator {
            grid_n,
            n_sensors_full,
            n_radii,
            r_max,
            sensor_subset,
            n_arc,
        })
    }

    /// Full-sampling operator with the default quadrature (`n_arc = 8·grid_n`).
    pub fn full(grid_n: usize, n_sensors_full: usize, n_radii: usize, r_max: f64) -> Result<Self> {
        PatOperator::new(
            grid_n,
            n_sensors_full,
            n_radii,
            r_max,
            (0..n_sensors_full).collect(),
            8 * grid_n,
        )
    }

    /// Subsampled operator with the default quadrature.
    pub fn subsampled(
        grid_n: usize,
        n_sensors_full: usize,
        n_radii: usize,
        r_max: f64,
        sensor_subset: Vec<usize>,
    ) -> Result<Self> {
        let n_arc = 8 * grid_n;
        PatOperator::new(grid_n, n_sensors_full, n_radii, r_max, sensor_subset, n_arc)
    }

    /// Keeps geometry but replaces the sensor subset.
    pub fn with_subset(&self, sensor_subset: Vec<usize>) -> Result<Self> {
        PatOperator::new(
            self.grid_n,
            self.n_sensors_full,
            self.n_radii,
            self.r_max,
            sensor_subset,
            self.n_arc,
        )
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn n_sensors_full(&self) -> usize {
        self.n_sensors_full
    }

    pub fn n_radii(&self) -> usize {
        self.n_radii
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn sensor_subset(&self) -> &[usize] {
        &self.sensor_subset
    }

    pub fn n_arc(&self) -> usize {
        self.n_arc
    }

    /// Position of full-set sensor `s` on the unit circle.
    pub fn sensor_position(&self, s: usize) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / self.n_sensors_full as f64;
        (theta.cos(), theta.sin())
    }

    /// Radius of sample `k`, equispaced in `(0, r_max]`.
    pub fn radius(&self, k: usize) -> f64 {
        (k as f64 + 1.0) * self.r_max / self.n_radii as f64
    }

    /// Serializes the geometry as a flat key=value block.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "grid_n={}", self.grid_n);
        let _ = writeln!(s, "n_sensors_full={}", self.n_sensors_full);
        let _ = writeln!(s, "n_radii={}", self.n_radii);
        let _ = writeln!(s, "r_max={}", self.r_max);
        let subset: Vec<String> = self.sensor_subset.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "sensor_subset={}", subset.join(","));
        let _ = writeln!(s, "n_arc={}", self.n_arc);
        s
    }

    /// Parses the key=value block written by [`to_key_value`]. `n_arc` is
    /// optional and defaults to `8·grid_n`; unknown keys are rejected.
    ///
    /// [`to_key_value`]: PatOperator::to_key_value
    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut grid_n = None;
        let mut n_sensors_full = None;
        let mut n_radii = None;
        let mut r_max = None;
        let mut sensor_subset = None;
        let mut n_arc = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("geometry line {}: expected key=value", lineno + 1))
            })?;
            let parse_usize = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Format(format!("geometry key {key}: {e}")))
            };
            match key.trim() {
                "grid_n" => grid_n = Some(parse_usize(value)?),
                "n_sensors_full" => n_sensors_full = Some(parse_usize(value)?),
                "n_radii" => n_radii = Some(parse_usize(value)?),
                "n_arc" => n_arc = Some(parse_usize(value)?),
                "r_max" => {
                    r_max = Some(value.trim().parse::<f64>().map_err(|e| {
                        Error::Format(format!("geometry key r_max: {e}"))
                    })?)
                }
                "sensor_subset" => {
                    let mut subset = Vec::new();
                    for part in value.split(',') {
                        subset.push(parse_usize(part)?);
                    }
                    sensor_subset = Some(subset);
                }
                other => {
                    return Err(Error::Format(format!("unknown geometry key '{other}'")));
                }
            }
        }
        let grid_n = grid_n.ok_or_else(|| Error::Format("missing grid_n".into()))?;
        let n_sensors_full =
            n_sensors_full.ok_or_else(|| Error::Format("missing n_sensors_full".into()))?;
        let n_radii = n_radii.ok_or_else(|| Error::Format("missing n_radii".into()))?;
        let r_max = r_max.ok_or_else(|| Error::Format("missing r_max".into()))?;
        let sensor_subset =
            sensor_subset.ok_or_else(|| Error::Format("missing sensor_subset".into()))?;
        let n_arc = n_arc.unwrap_or(8 * grid_n);
        PatOperator::new(grid_n, n_sensors_full, n_radii, r_max, sensor_subset, n_arc)
    }

    /// Visits the four bilinear taps of physical point `(px, py)`; taps that
    /// fall outside the grid are skipped (zero extension).
    #[inline]
    fn for_each_tap(&self, px: f64, py: f64, mut f: impl FnMut(usize, f64)) {
        let n = self.grid_n;
        let h = 2.0 / n as f64;
        // Continuous pixel-center coordinates.
        let gx = (px + 1.0) / h - 0.5;
        let gy = (py + 1.0) / h - 0.5;
        let x0 = gx.floor();
        let y0 = gy.floor();
        let fx = gx - x0;
        let fy = gy - y0;
        let x0 = x0 as isize;
        let y0 = y0 as isize;
        let taps = [
            (x0, y0, (1.0 - fx) * (1.0 - fy)),
            (x0 + 1, y0, fx * (1.0 - fy)),
            (x0, y0 + 1, (1.0 - fx) * fy),
            (x0 + 1, y0 + 1, fx * fy),
        ];
        for (xi, yi, w) in taps {
            if xi >= 0 && yi >= 0 && (xi as usize) < n && (yi as usize) < n && w != 0.0 {
                f(yi as usize * n + xi as usize, w);
            }
        }
    }

    fn check_image(&self, x: &Image) -> Result<()> {
        if x.width() != self.grid_n || x.height() != self.grid_n {
            return Err(Error::shape(
                format!("image {0}x{0}", self.grid_n),
                format!("image {}x{}", x.width(), x.height()),
            ));
        }
        Ok(())
    }

    fn check_sino(&self, y: &Sinogram) -> Result<()> {
        if y.n_sensors() != self.sensor_subset.len() || y.n_samples() != self.n_radii {
            return Err(Error::shape(
                format!("sinogram {}x{}", self.sensor_subset.len(), self.n_radii),
                format!("sinogram {}x{}", y.n_sensors(), y.n_samples()),
            ));
        }
        Ok(())
    }
}

impl ForwardOperator for PatOperator {
    fn image_shape(&self) -> (usize, usize) {
        (self.grid_n, self.grid_n)
    }

    fn sino_shape(&self) -> (usize, usize) {
        (self.sensor_subset.len(), self.n_radii)
    }

    fn apply(&self, x: &Image) -> Result<Sinogram> {
        self.check_image(x)?;
        let values = x.values();
        let inv_arc = 1.0 / self.n_arc as f64;
        let mut out = vec![0.0; self.sensor_subset.len() * self.n_radii];
        for (row, &s) in self.sensor_subset.iter().enumerate() {
            let (cx, cy) = self.sensor_position(s);
            for k in 0..self.n_radii {
                let r = self.radius(k);
                let mut acc = 0.0;
                for j in 0..self.n_arc {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 * inv_arc;
                    let px = cx + r * phi.cos();
                    let py = cy + r * phi.sin();
                    self.for_each_tap(px, py, |idx, w| acc += w * values[idx]);
                }
                out[row * self.n_radii + k] = acc * inv_arc;
            }
        }
        Ok(Sinogram::new(self.sensor_subset.len(), self.n_radii, out)?)
    }

    fn adjoint(&self, y: &Sinogram) -> Result<Image> {
        self.check_sino(y)?;
        let inv_arc = 1.0 / self.n_arc as f64;
        let mut out = vec![0.0; self.grid_n * self.grid_n];
        for (row, &s) in self.sensor_subset.iter().enumerate() {
            let (cx, cy) = self.sensor_position(s);
            for k in 0..self.n_radii {
                let coeff = y.get(row, k) * inv_arc;
                if coeff == 0.0 {
                    continue;
                }
                let r = self.radius(k);
                for j in 0..self.n_arc {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 * inv_arc;
                    let px = cx + r * phi.cos();
                    let py = cy + r * phi.sin();
                    self.for_each_tap(px, py, |idx, w| out[idx] += coeff * w);
                }
            }
        }
        Ok(Image::new(self.grid_n, self.grid_n, out)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SeededRng;

    fn desk_op() -> PatOperator {
        // Small geometry keeps the unit tests quick.
        PatOperator::new(32, 16, 48, 2.0, (0..16).collect(), 128).unwrap()
    }

    #[test]
    fn constructor_validates_subset() {
        assert!(PatOperator::new(32, 16, 48, 2.0, vec![3, 3], 128).is_err());
        assert!(PatOperator::new(32, 16, 48, 2.0, vec![5, 2], 128).is_err());
        assert!(PatOperator::new(32, 16, 48, 2.0, vec![16], 128).is_err());
        assert!(PatOperator::new(4, 16, 48, 2.0, vec![0], 128).is_err());
        assert!(PatOperator::new(32, 16, 1, 2.0, vec![0], 128).is_err());
    }

    #[test]
    fn constant_image_has_constant_means_on_interior_circles() {
        // Diagonal sensor (index 2 of 16 = 45 degrees) with a small radius:
        // the whole circle stays strictly inside the grid, so bilinear
        // weights always sum to one and the mean is exact.
        let c = 0.75;
        let n = 64;
        let op = PatOperator::new(n, 16, 8, 0.2, vec![2], 256).unwrap();
        let img = Image::new(n, n, vec![c; n * n]).unwrap();
        let sino = op.apply(&img).unwrap();
        for k in 0..op.n_radii() {
            let v = sino.get(0, k);
            assert!((v - c).abs() < 1e-12, "k={k} v={v}");
        }
    }

    #[test]
    fn unit_disc_indicator_boundary_sensor_arc_fraction() {
        // Sensor at (1,0), radius 1: the fraction of the circle inside the
        // unit disc is arccos(1/2)/pi = 1/3.
        let n = 256;
        let n_radii = 256; // radius grid hits r = 1 exactly at k = 127
        let op = PatOperator::new(n, 64, n_radii, 2.0, vec![0], 512).unwrap();
        let mut values = vec![0.0; n * n];
        for row in 0..n {
            let py = Image::pixel_center(row, n);
            for col in 0..n {
                let px = Image::pixel_center(col, n);
                if px * px + py * py <= 1.0 {
                    values[row * n + col] = 1.0;
                }
            }
        }
        let img = Image::new(n, n, values).unwrap();
        let sino = op.apply(&img).unwrap();
        let k = 127;
        assert!((op.radius(k) - 1.0).abs() < 1e-12);
        let got = sino.get(0, k);
        assert!((got - 1.0 / 3.0).abs() < 2e-2, "got={got}");
    }

    #[test]
    fn linearity_of_apply() {
        let op = desk_op();
        let mut rng = SeededRng::new(21);
        let n = op.grid_n();
        let x1 = Image::new(n, n, rng.normal_vec(n * n)).unwrap();
        let x2 = Image::new(n, n, rng.normal_vec(n * n)).unwrap();
        let (a, b) = (1.7, -0.3);
        let lhs = op.apply(&x1.scaled(a).add_scaled(b, &x2).unwrap()).unwrap();
        let rhs = op
            .apply(&x1)
            .unwrap()
            .scaled(a)
            .add_scaled(b, &op.apply(&x2).unwrap())
            .unwrap();
        let num: f64 = lhs
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        assert!(num <= 1e-12 * (1.0 + rhs.norm2()), "diff={num}");
    }

    #[test]
    fn adjoint_identity_random_pairs() {
        let op = desk_op();
        let mut rng = SeededRng::new(22);
        let n = op.grid_n();
        let (s, k) = op.sino_shape();
        for _ in 0..20 {
            let x = Image::new(n, n, rng.normal_vec(n * n)).unwrap();
            let y = Sinogram::new(s, k, rng.normal_vec(s * k)).unwrap();
            let lhs = op.apply(&x).unwrap().inner_product(&y).unwrap();
            let rhs = x.inner_product(&op.adjoint(&y).unwrap()).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()),
                "lhs={lhs} rhs={rhs}"
            );
        }
    }

    #[test]
    fn adjoint_of_zero_is_zero() {
        let op = desk_op();
        let (s, k) = op.sino_shape();
        let img = op.adjoint(&Sinogram::zeros(s, k)).unwrap();
        assert!(img.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_entry_stencil_mass_matches_forward_of_ones() {
        // The adjoint of a unit sinogram entry is the quadrature stencil of
        // one circle; its total mass equals the forward map applied to the
        // all-ones image at the same (sensor, radius): both sum the same
        // interpolation weights, clipped at the grid boundary, and the mass
        // is at most 1.
        let op = desk_op();
        let n = op.grid_n();
        let (s, kdim) = op.sino_shape();
        let ones = Image::new(n, n, vec![1.0; n * n]).unwrap();
        let forward_of_ones = op.apply(&ones).unwrap();
        for &(row, k) in &[(0usize, 5usize), (3, 20), (9, 40)] {
            let mut y = vec![0.0; s * kdim];
            y[row * kdim + k] = 1.0;
            let stencil = op.adjoint(&Sinogram::new(s, kdim, y).unwrap()).unwrap();
            let mass: f64 = stencil.values().iter().sum();
            let expected = forward_of_ones.get(row, k);
            assert!(
                (mass - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
                "mass={mass} expected={expected}"
            );
            assert!(mass <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn subsampled_adjoint_equals_zero_filled_full_adjoint() {
        let full = desk_op();
        let subset = vec![1usize, 4, 9, 13];
        let sub = full.with_subset(subset.clone()).unwrap();
        let mut rng = SeededRng::new(33);
        let y_sub = Sinogram::new(subset.len(), full.n_radii(), rng.normal_vec(subset.len() * full.n_radii())).unwrap();

        // Zero-fill into the full sensor layout.
        let mut y_full = vec![0.0; full.n_sensors_full() * full.n_radii()];
        for (row, &s) in subset.iter().enumerate() {
            for k in 0..full.n_radii() {
                y_full[s * full.n_radii() + k] = y_sub.get(row, k);
            }
        }
        let y_full = Sinogram::new(full.n_sensors_full(), full.n_radii(), y_full).unwrap();

        let a = sub.adjoint(&y_sub).unwrap();
        let b = full.adjoint(&y_full).unwrap();
        for (p, q) in a.values().iter().zip(b.values()) {
            assert!((p - q).abs() <= 1e-14 * (1.0 + q.abs()));
        }
    }

    #[test]
    fn geometry_roundtrip() {
        let op = PatOperator::subsampled(64, 64, 256, 2.0, vec![0, 5, 9, 60]).unwrap();
        let text = op.to_key_value();
        let back = PatOperator::from_key_value(&text).unwrap();
        assert_eq!(back.grid_n(), 64);
        assert_eq!(back.n_sensors_full(), 64);
        assert_eq!(back.n_radii(), 256);
        assert_eq!(back.r_max(), 2.0);
        assert_eq!(back.sensor_subset(), &[0, 5, 9, 60]);
        assert_eq!(back.n_arc(), 512);
    }

    #[test]
    fn geometry_rejects_unknown_keys() {
        let text = "grid_n=64\nn_sensors_full=64\nn_radii=256\nr_max=2\nsensor_subset=0,1\nbogus=3\n";
        assert!(PatOperator::from_key_value(text).is_err());
    }

    #[test]
    fn apply_rejects_wrong_grid() {
        let op = desk_op();
        let img = Image::zeros(16, 16);
        assert!(op.apply(&img).is_err());
    }
}
