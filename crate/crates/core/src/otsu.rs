//! Otsu's global threshold.
//!
//! A threshold `t` splits the gray levels into a low class `[0, t]` and a
//! high class `[t + 1, 255]`. For each class we track its probability `w`
//! and mean `mu`; the between-class variance is `w1 * w2 * (mu1 - mu2)^2`
//! and the optimal threshold maximizes it. Thresholds range over `[0, 254]`
//! so that both classes can be nonempty.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::imageio::{BinaryImage, GrayImage};
use crate::LEVELS;

/// Largest admissible threshold.
pub const MAX_THRESHOLD: u8 = (LEVELS - 2) as u8;

/// Class statistics at a single threshold. Means are in gray-level units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub t: u8,
    pub w1: f64,
    pub w2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma_b2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtsuResult {
    pub t_star: u8,
    /// Maximum between-class variance, `sigma_b2` at `t_star`.
    pub mbcv: f64,
    pub stats: ClassStats,
    pub mu_t: f64,
}

/// Integer running sums over `[0, t]`: pixel count and sum of gray levels.
#[derive(Clone, Copy)]
struct Prefix {
    n1: u64,
    s1: u64,
}

fn stats_from_prefix(t: u8, prefix: Prefix, total: u64, sum: u64) -> ClassStats {
    let n2 = total - prefix.n1;
    let s2 = sum - prefix.s1;
    let n = total as f64;
    let w1 = prefix.n1 as f64 / n;
    let w2 = n2 as f64 / n;
    let mu1 = if prefix.n1 == 0 {
        0.0
    } else {
        prefix.s1 as f64 / prefix.n1 as f64
    };
    let mu2 = if n2 == 0 { 0.0 } else { s2 as f64 / n2 as f64 };
    let sigma_b2 = if prefix.n1 == 0 || n2 == 0 {
        0.0
    } else {
        let d = mu1 - mu2;
        w1 * w2 * d * d
    };
    ClassStats {
        t,
        w1,
        w2,
        mu1,
        mu2,
        sigma_b2,
    }
}

fn level_sum(hist: &Histogram) -> u64 {
    hist.counts().iter().enumerate().map(|(i, &c)| i as u64 * c).sum()
}

/// Statistics of the two classes induced by threshold `t`.
pub fn class_stats(hist: &Histogram, t: u8) -> Result<ClassStats> {
    if t > MAX_THRESHOLD {
        return Err(Error::domain(format!("threshold {t} outside [0, {MAX_THRESHOLD}]")));
    }
    let mut prefix = Prefix { n1: 0, s1: 0 };
    for (i, &c) in hist.counts().iter().enumerate().take(t as usize + 1) {
        prefix.n1 += c;
        prefix.s1 += i as u64 * c;
    }
    Ok(stats_from_prefix(t, prefix, hist.total(), level_sum(hist)))
}

/// Scans every threshold in one pass and returns the one maximizing the
/// between-class variance, breaking ties toward the smallest `t`.
///
/// Fails with [`Error::DegenerateHistogram`] when fewer than two bins are
/// occupied.
pub fn otsu_threshold(hist: &Histogram) -> Result<OtsuResult> {
    if hist.occupied() < 2 {
        return Err(Error::DegenerateHistogram);
    }
    let total = hist.total();
    let sum = level_sum(hist);
    let mut prefix = Prefix { n1: 0, s1: 0 };
    let mut best: Option<ClassStats> = None;
    for t in 0..=MAX_THRESHOLD {
        let c = hist.counts()[t as usize];
        prefix.n1 += c;
        prefix.s1 += u64::from(t) * c;
        let stats = stats_from_prefix(t, prefix, total, sum);
        if best.is_none_or(|b| stats.sigma_b2 > b.sigma_b2) {
            best = Some(stats);
        }
    }
    let stats = best.expect("threshold range is nonempty");
    Ok(OtsuResult {
        t_star: stats.t,
        mbcv: stats.sigma_b2,
        stats,
        mu_t: sum as f64 / total as f64,
    })
}

/// Thresholds `image` at `t`. Pixels `<= t` become black (0) and the rest
/// white (255); `invert` swaps the two assignments.
pub fn binarize(image: &GrayImage, t: u8, invert: bool) -> BinaryImage {
    let (low, high) = if invert { (255, 0) } else { (0, 255) };
    let pixels = image
        .pixels()
        .iter()
        .map(|&v| if v <= t { low } else { high })
        .collect();
    BinaryImage::new(image.width(), image.height(), pixels).expect("dimensions come from a valid image")
}
