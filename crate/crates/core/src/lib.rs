//! Text polarity detection for document images.
//!
//! The pipeline builds a 256-bin gray-level histogram, remaps it through the
//! normalized power law `o = i^(1/gamma)` for a grid of `gamma >= 1`, and
//! records the maximum between-class variance (MBCV) of Otsu's method for
//! each transformed histogram. A rising MBCV curve indicates bright text on
//! a dark background, a falling one dark text on a bright background.
//!
//! ```no_run
//! use polarity::{imageio, sweep::{detect_polarity, SweepConfig}};
//!
//! let image = imageio::read_gray("page.pgm")?;
//! let report = detect_polarity(&image, &SweepConfig::default())?;
//! println!("{:?} ({:?})", report.polarity, report.trend);
//! # Ok::<(), polarity::Error>(())
//! ```

pub mod conditions;
pub mod error;
pub mod histogram;
pub mod imageio;
pub mod otsu;
pub mod par;
pub mod powerlaw;
pub mod sweep;
pub mod synth;

pub use error::{Error, Result};
pub use histogram::Histogram;
pub use imageio::{BinaryImage, GrayImage};
pub use otsu::{ClassStats, OtsuResult};
pub use powerlaw::Gamma;

/// Number of gray levels handled by the pipeline.
pub const LEVELS: usize = 256;

/// Largest gray level, `LEVELS - 1`.
pub const MAX_LEVEL: u8 = 255;
