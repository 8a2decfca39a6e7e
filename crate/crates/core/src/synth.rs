//! Seeded two-mode Gaussian mixture images.
//!
//! Generation is fully specified so images can be reproduced bit-for-bit in
//! other languages:
//!
//! * PRNG: xoshiro256++ seeded with `seed` through SplitMix64 (the
//!   reference `seed_from_u64` expansion: four successive SplitMix64
//!   outputs fill the state words `s[0..4]`).
//! * Uniform: `u = (next_u64() >> 11) * 2^-53`, in `[0, 1)`.
//! * Per pixel, in row-major order, three uniforms are drawn:
//!   `u0` picks mode 1 when `u0 < weight1`, otherwise mode 2; then `u1`,
//!   `u2` feed Box-Muller, `z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.
//! * Level: `floor((mean + std * z) * 255 + 0.5)` clamped to `[0, 255]`.

use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::GrayImage;
use crate::MAX_LEVEL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub width: usize,
    pub height: usize,
    /// Normalized mean of the darker mode.
    pub mode1_mean: f64,
    pub mode2_mean: f64,
    pub mode1_std: f64,
    pub mode2_std: f64,
    /// Probability that a pixel is drawn from mode 1.
    pub weight1: f64,
    pub seed: u64,
}

pub const DEFAULT_SIZE: usize = 128;

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::domain("synthetic image dimensions must be positive"));
        }
        if !(0.0 <= self.mode1_mean && self.mode1_mean < self.mode2_mean && self.mode2_mean <= 1.0) {
            return Err(Error::domain(format!(
                "need 0 <= mode1_mean < mode2_mean <= 1, got {} and {}",
                self.mode1_mean, self.mode2_mean
            )));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.mode1_std) && positive(self.mode2_std)) {
            return Err(Error::domain("mode standard deviations must be positive"));
        }
        if !(self.weight1 > 0.0 && self.weight1 < 1.0) {
            return Err(Error::domain(format!("weight1 {} not in (0, 1)", self.weight1)));
        }
        Ok(())
    }

    pub fn with_size(mut self, width: usize, height: usize) -> Self {
        self.width = width;
        self.height = height;
        self
    }
}

/// Dark background at 0 with bright text just above it: balanced, low
/// contrast, threshold near the dark end.
pub fn case_i_spec(seed: u64) -> SynthSpec {
    SynthSpec {
        width: DEFAULT_SIZE,
        height: DEFAULT_SIZE,
        mode1_mean: 0.0,
        mode2_mean: 0.12,
        mode1_std: 0.005,
        mode2_std: 0.02,
        weight1: 0.5,
        seed,
    }
}

/// Dark text on a near-white background: balanced, high contrast,
/// threshold near the bright end.
pub fn case_ii_spec(seed: u64) -> SynthSpec {
    SynthSpec {
        width: DEFAULT_SIZE,
        height: DEFAULT_SIZE,
        mode1_mean: 0.42,
        mode2_mean: 0.99,
        mode1_std: 0.1,
        mode2_std: 0.02,
        weight1: 0.5,
        seed,
    }
}

/// One dominant mid-gray mode with a small overlapping second mode.
pub fn unimodal_spec(seed: u64) -> SynthSpec {
    SynthSpec {
        width: DEFAULT_SIZE,
        height: DEFAULT_SIZE,
        mode1_mean: 0.45,
        mode2_mean: 0.6,
        mode1_std: 0.08,
        mode2_std: 0.08,
        weight1: 0.92,
        seed,
    }
}

fn uniform(rng: &mut Xoshiro256PlusPlus) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn standard_normal(rng: &mut Xoshiro256PlusPlus) -> f64 {
    let u1 = uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn generate(spec: &SynthSpec) -> Result<GrayImage> {
    spec.validate()?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
    let scale = f64::from(MAX_LEVEL);
    let n = spec.width * spec.height;
    let mut pixels = Vec::with_capacity(n);
    for _ in 0..n {
        let (mean, std) = if uniform(&mut rng) < spec.weight1 {
            (spec.mode1_mean, spec.mode1_std)
        } else {
            (spec.mode2_mean, spec.mode2_std)
        };
        let x = mean + std * standard_normal(&mut rng);
        pixels.push((x * scale + 0.5).floor().clamp(0.0, scale) as u8);
    }
    GrayImage::new(spec.width, spec.height, pixels)
}

/// `key=value` lines, one per field, as written next to generated images.
impl fmt::Display for SynthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "width={}", self.width)?;
        writeln!(f, "height={}", self.height)?;
        writeln!(f, "mode1_mean={}", self.mode1_mean)?;
        writeln!(f, "mode2_mean={}", self.mode2_mean)?;
        writeln!(f, "mode1_std={}", self.mode1_std)?;
        writeln!(f, "mode2_std={}", self.mode2_std)?;
        writeln!(f, "weight1={}", self.weight1)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "prng=xoshiro256++/splitmix64")
    }
}

impl std::str::FromStr for SynthSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SynthSpec {
            width: 0,
            height: 0,
            mode1_mean: f64::NAN,
            mode2_mean: f64::NAN,
            mode1_std: f64::NAN,
            mode2_std: f64::NAN,
            weight1: f64::NAN,
            seed: 0,
        };
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("expected key=value, got {line:?}")))?;
            let bad = || Error::domain(format!("invalid value for {key}: {value:?}"));
            let float = || value.parse::<f64>().map_err(|_| bad());
            match key {
                "width" => spec.width = value.parse().map_err(|_| bad())?,
                "height" => spec.height = value.parse().map_err(|_| bad())?,
                "mode1_mean" => spec.mode1_mean = float()?,
                "mode2_mean" => spec.mode2_mean = float()?,
                "mode1_std" => spec.mode1_std = float()?,
                "mode2_std" => spec.mode2_std = float()?,
                "weight1" => spec.weight1 = float()?,
                "seed" => spec.seed = value.parse().map_err(|_| bad())?,
                "prng" => {}
                _ => return Err(Error::domain(format!("unknown key {key:?}"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}
