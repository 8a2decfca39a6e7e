use crate::error::{Error, Result};
use crate::imageio::GrayImage;
use crate::par::Execution;
use crate::LEVELS;

const CHUNK: usize = 1 << 16;

/// Gray-level histogram with `LEVELS` bins and its probability normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    counts: [u64; LEVELS],
    total: u64,
    probabilities: [f64; LEVELS],
}

impl Histogram {
    /// Fails with [`Error::EmptyHistogram`] when every count is zero.
    pub fn from_counts(counts: [u64; LEVELS]) -> Result<Self> {
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::domain("histogram total overflows u64"))?;
        if total == 0 {
            return Err(Error::EmptyHistogram);
        }
        let n = total as f64;
        let mut probabilities = [0.0; LEVELS];
        for (p, &c) in probabilities.iter_mut().zip(counts.iter()) {
            *p = c as f64 / n;
        }
        Ok(Histogram {
            counts,
            total,
            probabilities,
        })
    }

    /// Like [`Histogram::from_counts`] but takes a slice, which must hold
    /// exactly `LEVELS` entries.
    pub fn from_slice(counts: &[u64]) -> Result<Self> {
        let counts: [u64; LEVELS] = counts
            .try_into()
            .map_err(|_| Error::domain(format!("expected {LEVELS} bins, got {}", counts.len())))?;
        Histogram::from_counts(counts)
    }

    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probabilities(&self) -> &[f64; LEVELS] {
        &self.probabilities
    }

    /// Number of bins with a nonzero count.
    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Mean gray level, `sum(i * p_i)`.
    pub fn mean(&self) -> f64 {
        let s: u64 = self.counts.iter().enumerate().map(|(i, &c)| i as u64 * c).sum();
        s as f64 / self.total as f64
    }
}

pub fn build_histogram(image: &GrayImage) -> Histogram {
    build_histogram_with(image, Execution::auto())
}

pub fn build_histogram_with(image: &GrayImage, exec: Execution) -> Histogram {
    let counts = exec.fold_chunks(
        image.pixels(),
        CHUNK,
        || [0u64; LEVELS],
        |acc, chunk| {
            for &v in chunk {
                acc[v as usize] += 1;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += y;
            }
            a
        },
    );
    // GrayImage guarantees at least one pixel.
    Histogram::from_counts(counts).expect("image has at least one pixel")
}
