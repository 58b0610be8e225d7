//! Binary grid file format and PGM preview export.
//!
//! Grid files are `"NETT"` magic, format version `u32` = 1, kind `u32`
//! (0 = image, 1 = sinogram), `dim0 u32`, `dim1 u32`, then `dim0·dim1`
//! little-endian IEEE-754 `f64` values in row-major order. `dim0` is the
//! number of rows (image height / sensor count), `dim1` the number of
//! columns (image width / sample count). All integers are little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Image, Sinogram};
use crate::error::{Error, Result};

const MAGIC: [u8; 4] = *b"NETT";
const VERSION: u32 = 1;
const KIND_IMAGE: u32 = 0;
const KIND_SINOGRAM: u32 = 1;

fn encode(kind: u32, dim0: u32, dim1: u32, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + values.len() * 8);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&kind.to_le_bytes());
    out.extend_from_slice(&dim0.to_le_bytes());
    out.extend_from_slice(&dim1.to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode(bytes: &[u8]) -> Result<(u32, u32, u32, Vec<f64>)> {
    if bytes.len() < 20 {
        return Err(Error::Format("grid file truncated before header".into()));
    }
    if bytes[0..4] != MAGIC {
        return Err(Error::Format("bad magic, expected \"NETT\"".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = u32_at(8);
    let dim0 = u32_at(12);
    let dim1 = u32_at(16);
    let n = dim0 as usize * dim1 as usize;
    let expected = 20 + 8 * n;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} bytes for {dim0}x{dim1} grid, got {}",
            bytes.len()
        )));
    }
    let values = bytes[20..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((kind, dim0, dim1, values))
}

/// Serializes an image to the binary grid format.
pub fn image_to_bytes(img: &Image) -> Vec<u8> {
    encode(
        KIND_IMAGE,
        img.height() as u32,
        img.width() as u32,
        img.values(),
    )
}

/// Serializes a sinogram to the binary grid format.
pub fn sinogram_to_bytes(sino: &Sinogram) -> Vec<u8> {
    encode(
        KIND_SINOGRAM,
        sino.n_sensors() as u32,
        sino.n_samples() as u32,
        sino.values(),
    )
}

pub fn image_from_bytes(bytes: &[u8]) -> Result<Image> {
    let (kind, dim0, dim1, values) = decode(bytes)?;
    if kind != KIND_IMAGE {
        return Err(Error::Format(format!("expected image (kind 0), got {kind}")));
    }
    Image::new(dim1 as usize, dim0 as usize, values)
}

pub fn sinogram_from_bytes(bytes: &[u8]) -> Result<Sinogram> {
    let (kind, dim0, dim1, values) = decode(bytes)?;
    if kind != KIND_SINOGRAM {
        return Err(Error::Format(format!(
            "expected sinogram (kind 1), got {kind}"
        )));
    }
    Sinogram::new(dim0 as usize, dim1 as usize, values)
}

pub fn write_image(img: &Image, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&image_to_bytes(img))?;
    Ok(())
}

pub fn read_image(path: &Path) -> Result<Image> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    image_from_bytes(&bytes)
}

pub fn write_sinogram(sino: &Sinogram, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&sinogram_to_bytes(sino))?;
    Ok(())
}

pub fn read_sinogram(path: &Path) -> Result<Sinogram> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    sinogram_from_bytes(&bytes)
}

/// 8-bit binary PGM (P5) preview with linear min-max scaling.
///
/// For visualization only; quantitative comparisons use the binary format.
pub fn write_pgm(img: &Image, path: &Path) -> Result<()> {
    let (lo, hi) = img
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let mut f = BufWriter::new(File::create(path)?);
    write!(f, "P5\n{} {}\n255\n", img.width(), img.height())?;
    let bytes: Vec<u8> = img
        .values()
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (((v - lo) / span) * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();
    f.write_all(&bytes)?;
    Ok(())
}
