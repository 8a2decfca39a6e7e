//! Normalized power-law transform `o = i^(1/gamma)`.
//!
//! Levels are normalized by 255 so both endpoints are fixed points, raised
//! to `power = 1/gamma`, scaled back and rounded half-up. With `gamma > 1`
//! the dark range is stretched and the bright range compressed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::imageio::GrayImage;
use crate::LEVELS;

/// A positive, finite gamma. The applied exponent is `1 / gamma`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Gamma(f64);

impl Gamma {
    pub const IDENTITY: Gamma = Gamma(1.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Gamma(gamma))
        } else {
            Err(Error::domain(format!("gamma must be positive and finite, got {gamma}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn power(self) -> f64 {
        1.0 / self.0
    }
}

impl TryFrom<f64> for Gamma {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Gamma::new(v)
    }
}

impl From<Gamma> for f64 {
    fn from(g: Gamma) -> f64 {
        g.0
    }
}

pub fn transform_level(v: u8, gamma: Gamma) -> u8 {
    let max = (LEVELS - 1) as f64;
    let x = f64::from(v) / max;
    (x.powf(gamma.power()) * max + 0.5).floor().clamp(0.0, max) as u8
}

/// Level mapping for one gamma, shared by the image and histogram paths.
#[derive(Debug, Clone)]
pub struct Lut {
    gamma: Gamma,
    table: [u8; LEVELS],
}

impl Lut {
    pub fn new(gamma: Gamma) -> Self {
        let mut table = [0u8; LEVELS];
        for (v, out) in table.iter_mut().enumerate() {
            *out = transform_level(v as u8, gamma);
        }
        Lut { gamma, table }
    }

    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn table(&self) -> &[u8; LEVELS] {
        &self.table
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.table[v as usize]
    }
}

pub fn transform_image(image: &GrayImage, gamma: Gamma) -> GrayImage {
    let lut = Lut::new(gamma);
    image.map(|v| lut.apply(v))
}

/// Moves the count of every bin `i` to bin `transform_level(i)`. Equivalent
/// to histogramming the transformed image, at O(L) cost.
pub fn transform_histogram(hist: &Histogram, gamma: Gamma) -> Histogram {
    remap_histogram(hist, &Lut::new(gamma))
}

pub fn remap_histogram(hist: &Histogram, lut: &Lut) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for (i, &c) in hist.counts().iter().enumerate() {
        counts[lut.table[i] as usize] += c;
    }
    Histogram::from_counts(counts).expect("remapping preserves the nonzero total")
}
