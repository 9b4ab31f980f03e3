//! Field sampling over the arena and bitmap rendering.

use std::io::Write;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, Luma};

use crate::world::{EnvironmentSpec, Vec2};

/// Scalar field sampled at cell centres of a `res × res` grid. Row 0 is the
/// lowest `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub res: usize,
    pub width: f64,
    pub height: f64,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn sample(env: &EnvironmentSpec, res: usize, mut field: impl FnMut(Vec2) -> f64) -> Self {
        assert!(res >= 2, "heatmap resolution must be at least 2");
        let mut values = Vec::with_capacity(res * res);
        for row in 0..res {
            for col in 0..res {
                values.push(field(Self::centre_of(env.width, env.height, res, row, col)));
            }
        }
        Self {
            res,
            width: env.width,
            height: env.height,
            values,
        }
    }

    fn centre_of(width: f64, height: f64, res: usize, row: usize, col: usize) -> Vec2 {
        Vec2::new(
            (col as f64 + 0.5) * width / res as f64,
            (row as f64 + 0.5) * height / res as f64,
        )
    }

    pub fn centre(&self, idx: usize) -> Vec2 {
        Self::centre_of(self.width, self.height, self.res, idx / self.res, idx % self.res)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest value (first in row-major order on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Linear value→intensity map; `y` grows upwards in the image.
    pub fn to_image(&self) -> GrayImage {
        let (lo, hi) = (self.min(), self.max());
        let span = hi - lo;
        let res = self.res as u32;
        GrayImage::from_fn(res, res, |x, y| {
            let row = (res - 1 - y) as usize;
            let v = self.values[row * self.res + x as usize];
            let level = if span > 0.0 { (v - lo) / span } else { 0.0 };
            Luma([(level * 255.0).round() as u8])
        })
    }

    /// Write the bitmap (format from the extension: `.png` or `.pgm`) and a
    /// `<path>.txt` sidecar holding the value range.
    pub fn render(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let path = path.as_ref();
        let img = self.to_image();
        let is_pgm = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        let written = if is_pgm {
            let file = std::io::BufWriter::new(std::fs::File::create(path)?);
            PnmEncoder::new(file)
                .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
                .write_image(img.as_raw(), img.width(), img.height(), ExtendedColorType::L8)
        } else {
            img.save(path)
        };
        written.map_err(|e| std::io::Error::other(e.to_string()))?;
        let mut side = std::fs::File::create(sidecar_path(path))?;
        writeln!(side, "resolution {}", self.res)?;
        writeln!(side, "min {}", self.min())?;
        writeln!(side, "max {}", self.max())?;
        Ok(())
    }

    /// `x,y,value` rows with a header.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "y", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            let c = self.centre(i);
            w.write_record([c.x.to_string(), c.y.to_string(), v.to_string()])?;
        }
        w.flush()
    }
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".txt");
    s.into()
}
