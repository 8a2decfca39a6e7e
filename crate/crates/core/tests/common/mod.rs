//! Test-only oracles and generators. The oracles recompute the two-class
//! statistics straight from the probability vector, one threshold at a
//! time, and share no code with the library's prefix-sum scan.

#![allow(dead_code)]

use polarity::{Histogram, LEVELS};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy)]
pub struct OracleStats {
    pub w1: f64,
    pub w2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu_t: f64,
    pub sigma_b2: f64,
}

pub fn oracle_stats(p: &[f64; LEVELS], t: usize) -> OracleStats {
    let mut w1 = 0.0;
    let mut m1 = 0.0;
    for (i, &pi) in p.iter().enumerate().take(t + 1) {
        w1 += pi;
        m1 += i as f64 * pi;
    }
    let mut w2 = 0.0;
    let mut m2 = 0.0;
    for (i, &pi) in p.iter().enumerate().skip(t + 1) {
        w2 += pi;
        m2 += i as f64 * pi;
    }
    let mu_t: f64 = p.iter().enumerate().map(|(i, &pi)| i as f64 * pi).sum();
    let mu1 = if w1 > 0.0 { m1 / w1 } else { 0.0 };
    let mu2 = if w2 > 0.0 { m2 / w2 } else { 0.0 };
    let sigma_b2 = if w1 > 0.0 && w2 > 0.0 {
        w1 * w2 * (mu1 - mu2) * (mu1 - mu2)
    } else {
        0.0
    };
    OracleStats {
        w1,
        w2,
        mu1,
        mu2,
        mu_t,
        sigma_b2,
    }
}

/// Exhaustive argmax over all 255 thresholds, smallest t on ties.
pub fn oracle_otsu(p: &[f64; LEVELS]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for t in 0..LEVELS - 1 {
        let s = oracle_stats(p, t).sigma_b2;
        if s > best.1 {
            best = (t, s);
        }
    }
    best
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn spikes(rng: &mut StdRng) -> [u64; LEVELS] {
    let mut c = [0u64; LEVELS];
    for _ in 0..rng.random_range(2..=6) {
        c[rng.random_range(0..LEVELS)] += rng.random_range(1..=1000);
    }
    c
}

fn uniform_block(rng: &mut StdRng) -> [u64; LEVELS] {
    let mut c = [0u64; LEVELS];
    let a = rng.random_range(0..LEVELS - 1);
    let b = rng.random_range(a + 1..LEVELS);
    for v in &mut c[a..=b] {
        *v = rng.random_range(0..=50);
    }
    c
}

fn gaussian_mixture(rng: &mut StdRng) -> [u64; LEVELS] {
    let mut c = [0u64; LEVELS];
    let comps = rng.random_range(1..=3);
    for _ in 0..comps {
        let mean = rng.random_range(0.0..255.0);
        let std = rng.random_range(1.0..40.0);
        let mass = rng.random_range(100.0..20_000.0);
        for (i, v) in c.iter_mut().enumerate() {
            let z = (i as f64 - mean) / std;
            *v += (mass * (-0.5 * z * z).exp() / std).round() as u64;
        }
    }
    c
}

/// Random histogram with at least two occupied bins, drawn from spikes,
/// uniform blocks and Gaussian mixtures in turn.
pub fn random_histogram(rng: &mut StdRng) -> Histogram {
    loop {
        let counts = match rng.random_range(0..3) {
            0 => spikes(rng),
            1 => uniform_block(rng),
            _ => gaussian_mixture(rng),
        };
        if counts.iter().filter(|&&c| c > 0).count() >= 2 {
            return Histogram::from_counts(counts).unwrap();
        }
    }
}

pub fn random_image(rng: &mut StdRng, max_side: usize) -> polarity::GrayImage {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    let px = (0..w * h).map(|_| rng.random::<u8>()).collect();
    polarity::GrayImage::new(w, h, px).unwrap()
}
