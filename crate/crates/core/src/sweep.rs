//! MBCV sweeps over gamma and the polarity decision built on them.
//!
//! For each gamma on a grid starting at 1 the histogram is remapped through
//! the power law and Otsu's MBCV recorded. The curve's trend over
//! increasing gamma decides the polarity:
//!
//! | trend        | polarity       |
//! |--------------|----------------|
//! | Increasing   | BrightOnDark   |
//! | Decreasing   | DarkOnBright   |
//! | Fluctuating  | Indeterminate  |
//!
//! The trend is judged on signs of successive differences only.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conditions::{check_conditions, ConditionConfig, ConditionReport};
use crate::error::{Error, Result};
use crate::histogram::{build_histogram_with, Histogram};
use crate::imageio::GrayImage;
use crate::otsu::{otsu_threshold, OtsuResult};
use crate::par::Execution;
use crate::powerlaw::{remap_histogram, Gamma, Lut};

/// Default grid: 1.0 to 5.0 in steps of 0.5 (powers 1.0 down to 0.2).
pub const DEFAULT_GAMMAS: [f64; 9] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];

pub const DEFAULT_TREND_THRESHOLD: f64 = 0.9;

/// Strictly increasing gamma values starting at exactly 1, at least three.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaGrid(Vec<Gamma>);

impl GammaGrid {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::domain(format!(
                "gamma grid needs at least 3 values, got {}",
                values.len()
            )));
        }
        if values[0] != 1.0 {
            return Err(Error::domain(format!("gamma grid must start at 1, got {}", values[0])));
        }
        let gammas = values.iter().map(|&v| Gamma::new(v)).collect::<Result<Vec<_>>>()?;
        if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::domain(format!(
                "gamma grid must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(GammaGrid(gammas))
    }

    /// Evenly spaced grid from 1 to `max` with `n` points.
    pub fn linspace(max: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("gamma grid needs at least 3 values"));
        }
        let step = (max - 1.0) / (n - 1) as f64;
        let values: Vec<f64> = (0..n).map(|k| 1.0 + step * k as f64).collect();
        GammaGrid::new(&values)
    }

    pub fn gammas(&self) -> &[Gamma] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for GammaGrid {
    fn default() -> Self {
        GammaGrid::new(&DEFAULT_GAMMAS).expect("default grid is valid")
    }
}

/// Parses a comma-separated list such as `1,1.5,2`.
impl FromStr for GammaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::domain(format!("invalid gamma value {:?}", part.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        GammaGrid::new(&values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSample {
    pub gamma: f64,
    pub power: f64,
    pub mbcv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCurve {
    /// Ordered by increasing gamma; the first sample is gamma = 1.
    pub samples: Vec<GammaSample>,
    pub base_mbcv: f64,
}

impl GammaCurve {
    pub fn mbcv(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.mbcv)
    }

    /// Samples in order of increasing power (decreasing gamma), the x-axis
    /// order of an MBCV-vs-power plot.
    pub fn by_power(&self) -> Vec<GammaSample> {
        self.samples.iter().rev().copied().collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "gamma,power,mbcv")?;
        for s in &self.samples {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", s.gamma, s.power, s.mbcv)?;
        }
        out.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// Parses the output of [`GammaCurve::write_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "gamma,power,mbcv" => {}
            _ => return Err(Error::domain("csv header must be `gamma,power,mbcv`")),
        }
        let mut samples = Vec::new();
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::domain(format!("csv line {}: expected 3 fields", lineno + 1)));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::domain(format!("csv line {}: invalid number {s:?}", lineno + 1)))
            };
            samples.push(GammaSample {
                gamma: num(fields[0])?,
                power: num(fields[1])?,
                mbcv: num(fields[2])?,
            });
        }
        let base_mbcv = samples
            .first()
            .map(|s| s.mbcv)
            .ok_or_else(|| Error::domain("csv has no samples"))?;
        Ok(GammaCurve { samples, base_mbcv })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trend {
    Increasing,
    Decreasing,
    Fluctuating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    BrightOnDark,
    DarkOnBright,
    Indeterminate,
}

impl From<Trend> for Polarity {
    fn from(trend: Trend) -> Self {
        match trend {
            Trend::Increasing => Polarity::BrightOnDark,
            Trend::Decreasing => Polarity::DarkOnBright,
            Trend::Fluctuating => Polarity::Indeterminate,
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub grid: GammaGrid,
    /// Minimum fraction of same-signed steps, in `(0.5, 1]`.
    pub trend_threshold: f64,
    pub conditions: ConditionConfig,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        validate_trend_threshold(self.trend_threshold)?;
        self.conditions.validate()
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: GammaGrid::default(),
            trend_threshold: DEFAULT_TREND_THRESHOLD,
            conditions: ConditionConfig::default(),
        }
    }
}

pub fn validate_trend_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.5 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("trend threshold {threshold} not in (0.5, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarityReport {
    pub polarity: Polarity,
    pub trend: Trend,
    pub monotone_fraction: f64,
    /// Otsu statistics of the untransformed image.
    pub otsu: OtsuResult,
    pub curve: GammaCurve,
    pub conditions: ConditionReport,
}

fn mbcv_or_zero(hist: &Histogram) -> f64 {
    match otsu_threshold(hist) {
        Ok(r) => r.mbcv,
        Err(_) => 0.0,
    }
}

pub fn sweep_mbcv(hist: &Histogram, grid: &GammaGrid) -> Result<GammaCurve> {
    sweep_mbcv_with(hist, grid, Execution::auto())
}

/// MBCV of the power-law-remapped histogram for every gamma of `grid`.
/// A remapped histogram that collapses to a single bin records 0.
pub fn sweep_mbcv_with(hist: &Histogram, grid: &GammaGrid, exec: Execution) -> Result<GammaCurve> {
    let base = otsu_threshold(hist)?;
    let mbcv = exec.map(grid.gammas(), |&g| {
        if g == Gamma::IDENTITY {
            base.mbcv
        } else {
            mbcv_or_zero(&remap_histogram(hist, &Lut::new(g)))
        }
    });
    let samples = grid
        .gammas()
        .iter()
        .zip(mbcv)
        .map(|(g, mbcv)| GammaSample {
            gamma: g.value(),
            power: g.power(),
            mbcv,
        })
        .collect();
    Ok(GammaCurve {
        samples,
        base_mbcv: base.mbcv,
    })
}

/// Counts the signs of successive MBCV differences. Returns the trend and
/// the fraction of steps moving in the majority direction; flat steps count
/// toward neither direction. `threshold` should lie in `(0.5, 1]`.
pub fn classify_trend(curve: &GammaCurve, threshold: f64) -> (Trend, f64) {
    let values: Vec<f64> = curve.mbcv().collect();
    let pairs = values.len().saturating_sub(1);
    if pairs == 0 {
        return (Trend::Fluctuating, 0.0);
    }
    let (mut up, mut down) = (0usize, 0usize);
    for w in values.windows(2) {
        if w[1] > w[0] {
            up += 1;
        } else if w[1] < w[0] {
            down += 1;
        }
    }
    let up_frac = up as f64 / pairs as f64;
    let down_frac = down as f64 / pairs as f64;
    let trend = if up_frac >= threshold {
        Trend::Increasing
    } else if down_frac >= threshold {
        Trend::Decreasing
    } else {
        Trend::Fluctuating
    };
    (trend, up_frac.max(down_frac))
}

pub fn detect_polarity(image: &GrayImage, config: &SweepConfig) -> Result<PolarityReport> {
    detect_polarity_with(image, config, Execution::auto())
}

pub fn detect_polarity_with(image: &GrayImage, config: &SweepConfig, exec: Execution) -> Result<PolarityReport> {
    detect_polarity_histogram(&build_histogram_with(image, exec), config, exec)
}

pub fn detect_polarity_histogram(hist: &Histogram, config: &SweepConfig, exec: Execution) -> Result<PolarityReport> {
    config.validate()?;
    let otsu = otsu_threshold(hist)?;
    let curve = sweep_mbcv_with(hist, &config.grid, exec)?;
    let (trend, monotone_fraction) = classify_trend(&curve, config.trend_threshold);
    Ok(PolarityReport {
        polarity: trend.into(),
        trend,
        monotone_fraction,
        otsu,
        conditions: check_conditions(&otsu, &config.conditions),
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LEVELS;

    fn curve(values: &[f64]) -> GammaCurve {
        GammaCurve {
            samples: values
                .iter()
                .enumerate()
                .map(|(k, &mbcv)| GammaSample {
                    gamma: 1.0 + k as f64,
                    power: 1.0 / (1.0 + k as f64),
                    mbcv,
                })
                .collect(),
            base_mbcv: values[0],
        }
    }

    fn two_spike() -> Histogram {
        let mut c = [0u64; LEVELS];
        c[0] = 10;
        c[255] = 10;
        Histogram::from_counts(c).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GammaGrid::new(&[1.0, 0.5, 2.0]).is_err());
        assert!(GammaGrid::new(&[1.0, 2.0]).is_err());
        assert!(GammaGrid::new(&[1.5, 2.0, 3.0]).is_err());
        assert!(GammaGrid::new(&[1.0, 2.0, 2.0]).is_err());
        assert!("1,0.5,2".parse::<GammaGrid>().is_err());
        assert!("1, x, 2".parse::<GammaGrid>().is_err());
        let g: GammaGrid = "1, 1.5 ,2".parse().unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(GammaGrid::default().len(), 9);
        let lin = GammaGrid::linspace(5.0, 9).unwrap();
        assert_eq!(lin, GammaGrid::default());
    }

    #[test]
    fn trend_examples() {
        assert_eq!(
            classify_trend(&curve(&[1.0, 2.0, 3.0, 4.0]), 0.9),
            (Trend::Increasing, 1.0)
        );
        assert_eq!(
            classify_trend(&curve(&[4.0, 3.0, 2.0, 1.0]), 0.9),
            (Trend::Decreasing, 1.0)
        );
        assert_eq!(classify_trend(&curve(&[2.0; 5]), 0.9), (Trend::Fluctuating, 0.0));
        let alt = [1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0];
        assert_eq!(classify_trend(&curve(&alt), 0.9), (Trend::Fluctuating, 0.5));
        // one flat step out of eight
        let mostly = [1.0, 2.0, 3.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        assert_eq!(classify_trend(&curve(&mostly), 0.9), (Trend::Fluctuating, 0.875));
        assert_eq!(classify_trend(&curve(&mostly), 0.85), (Trend::Increasing, 0.875));
    }

    #[test]
    fn two_spike_curve_is_flat() {
        let grid = GammaGrid::new(&[1.0, 2.0, 3.0]).unwrap();
        let c = sweep_mbcv(&two_spike(), &grid).unwrap();
        let v: Vec<f64> = c.mbcv().collect();
        assert_eq!(v, vec![6502500.0 / 400.0; 3]);
        assert_eq!(v[0], 16256.25);
        let report = detect_polarity_histogram(&two_spike(), &SweepConfig::default(), Execution::Sequential).unwrap();
        assert_eq!(report.trend, Trend::Fluctuating);
        assert_eq!(report.polarity, Polarity::Indeterminate);
    }

    #[test]
    fn collapsed_histogram_records_zero() {
        // 254 and 255 merge under strong compression of the bright end.
        let mut c = [0u64; LEVELS];
        c[254] = 1;
        c[255] = 1;
        let h = Histogram::from_counts(c).unwrap();
        let grid = GammaGrid::new(&[1.0, 2.0, 5.0]).unwrap();
        let curve = sweep_mbcv(&h, &grid).unwrap();
        assert_eq!(curve.samples[0].mbcv, 0.25);
        assert_eq!(curve.samples[2].mbcv, 0.0);
    }

    #[test]
    fn identity_sample_is_plain_otsu() {
        let mut c = [0u64; LEVELS];
        for (i, v) in c.iter_mut().enumerate() {
            *v = (i as u64 * 37) % 11;
        }
        let h = Histogram::from_counts(c).unwrap();
        let curve = sweep_mbcv(&h, &GammaGrid::default()).unwrap();
        assert_eq!(curve.samples[0].mbcv, otsu_threshold(&h).unwrap().mbcv);
        assert_eq!(curve.base_mbcv, curve.samples[0].mbcv);
    }

    #[test]
    fn degenerate_input_rejected() {
        let img = GrayImage::filled(3, 3, 9).unwrap();
        assert!(matches!(
            detect_polarity(&img, &SweepConfig::default()),
            Err(Error::DegenerateHistogram)
        ));
    }

    #[test]
    fn invalid_threshold_rejected() {
        let cfg = SweepConfig {
            trend_threshold: 0.5,
            ..SweepConfig::default()
        };
        assert!(detect_polarity_histogram(&two_spike(), &cfg, Execution::Sequential).is_err());
    }

    #[test]
    fn csv_layout() {
        let c = curve(&[1.5, 2.25, 3.0]);
        let text = c.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("gamma,power,mbcv"));
        assert_eq!(lines.count(), 3);
        assert_eq!(GammaCurve::from_csv(&text).unwrap(), c);
        assert!(GammaCurve::from_csv("a,b,c\n").is_err());
        assert!(GammaCurve::from_csv("gamma,power,mbcv\n1,2\n").is_err());
    }

    #[test]
    fn by_power_reverses() {
        let c = curve(&[1.0, 2.0, 3.0]);
        let p = c.by_power();
        assert!(p.windows(2).all(|w| w[0].power < w[1].power));
    }
}
