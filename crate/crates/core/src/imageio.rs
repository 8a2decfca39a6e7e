//! Grayscale image containers and Netpbm I/O.
//!
//! Reads PGM (`P2`, `P5`) and PPM (`P3`, `P6`) images. Color input is
//! reduced to gray with BT.601 luma weights; samples with a maxval other
//! than 255 are rescaled to `[0, 255]` with round-half-up. Output is always
//! binary PGM (`P5`) with maxval 255 and a single newline after each header
//! field.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixels. Fails when a dimension is zero
    /// or the pixel count does not match `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::domain("image dimensions overflow"))?;
        if pixels.len() != expected {
            return Err(Error::domain(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        GrayImage::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        if x < self.width && y < self.height {
            Some(self.pixels[y * self.width + x])
        } else {
            None
        }
    }

    /// Applies `f` to every pixel, keeping the dimensions.
    pub fn map(&self, f: impl Fn(u8) -> u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Intensity inversion `v -> 255 - v`.
    pub fn inverted(&self) -> GrayImage {
        self.map(|v| 255 - v)
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// A two-valued image whose pixels are exactly 0 or 255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        let gray = GrayImage::new(width, height, pixels)?;
        if let Some(pos) = gray.pixels.iter().position(|&v| v != 0 && v != 255) {
            return Err(Error::domain(format!(
                "binary image pixel {pos} has value {}, expected 0 or 255",
                gray.pixels[pos]
            )));
        }
        Ok(BinaryImage {
            width,
            height,
            pixels: gray.pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Swaps black and white.
    pub fn complement(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| 255 - v).collect(),
        }
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.clone(),
        }
    }
}

/// BT.601 luma, rounded half-up.
pub fn rgb_to_gray(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    (y + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn read_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let bytes = fs::read(path)?;
    decode(&bytes)
}

/// Writes `image` as a `P5` PGM with maxval 255.
pub fn write_binary(image: &BinaryImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(image.width, image.height, &image.pixels))?;
    Ok(())
}

/// Writes an arbitrary grayscale image as a `P5` PGM with maxval 255.
pub fn write_gray(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(image.width, image.height, &image.pixels))?;
    Ok(())
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let header = format!("P5\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(pixels);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    GrayAscii,
    GrayBinary,
    RgbAscii,
    RgbBinary,
}

impl Kind {
    fn channels(self) -> usize {
        match self {
            Kind::GrayAscii | Kind::GrayBinary => 1,
            Kind::RgbAscii | Kind::RgbBinary => 3,
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.data.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or_else(|| Error::format(start, format!("{what} does not fit in 64 bits")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(if self.pos >= self.data.len() {
                Error::format(start, format!("unexpected end of data while reading {what}"))
            } else {
                Error::format(start, format!("expected decimal {what}"))
            });
        }
        Ok(value)
    }
}

/// Decodes an in-memory PGM/PPM file.
pub fn decode(data: &[u8]) -> Result<GrayImage> {
    if data.len() < 2 {
        return Err(Error::format(0, "missing magic number"));
    }
    let kind = match &data[..2] {
        b"P2" => Kind::GrayAscii,
        b"P5" => Kind::GrayBinary,
        b"P3" => Kind::RgbAscii,
        b"P6" => Kind::RgbBinary,
        [b'P', b'1' | b'4' | b'7'] => {
            return Err(Error::Unsupported(format!(
                "Netpbm variant {}",
                String::from_utf8_lossy(&data[..2])
            )))
        }
        _ => return Err(Error::format(0, "not a PGM/PPM file")),
    };
    let mut cur = Cursor { data, pos: 2 };

    let width_at = cur.pos;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::format(
            width_at,
            format!("zero image dimension {width}x{height}"),
        ));
    }
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval == 0 {
        return Err(Error::format(maxval_at, "maxval must be positive"));
    }
    if maxval > 65535 {
        return Err(Error::Unsupported(format!("maxval {maxval} exceeds 65535")));
    }
    let (width, height) = (width as usize, height as usize);
    let samples = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(kind.channels()))
        .ok_or_else(|| Error::format(width_at, "image dimensions overflow"))?;

    let raw: Vec<u64> = match kind {
        Kind::GrayBinary | Kind::RgbBinary => {
            // Exactly one whitespace byte separates maxval from the raster.
            match data.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                Some(_) => return Err(Error::format(cur.pos, "expected whitespace after maxval")),
                None => return Err(Error::format(cur.pos, "unexpected end of data after maxval")),
            }
            let bytes_per = if maxval > 255 { 2 } else { 1 };
            let need = samples
                .checked_mul(bytes_per)
                .ok_or_else(|| Error::format(cur.pos, "raster size overflow"))?;
            let available = data.len() - cur.pos;
            if available < need {
                return Err(Error::format(
                    data.len(),
                    format!("truncated raster: expected {need} bytes, found {available}"),
                ));
            }
            let raster = &data[cur.pos..cur.pos + need];
            if bytes_per == 1 {
                raster.iter().map(|&b| u64::from(b)).collect()
            } else {
                raster
                    .chunks_exact(2)
                    .map(|c| u64::from(u16::from_be_bytes([c[0], c[1]])))
                    .collect()
            }
        }
        Kind::GrayAscii | Kind::RgbAscii => {
            let mut out = Vec::with_capacity(samples);
            for _ in 0..samples {
                out.push(cur.number("sample")?);
            }
            out
        }
    };

    if let Some(pos) = raw.iter().position(|&v| v > maxval) {
        return Err(Error::format(
            cur.pos,
            format!("sample {pos} value {} exceeds maxval {maxval}", raw[pos]),
        ));
    }

    let rescale = |v: u64| -> u8 {
        if maxval == 255 {
            v as u8
        } else {
            ((v * 255 * 2 + maxval) / (2 * maxval)) as u8
        }
    };

    let pixels = match kind.channels() {
        1 => raw.into_iter().map(rescale).collect(),
        _ => raw
            .chunks_exact(3)
            .map(|c| rgb_to_gray(rescale(c[0]), rescale(c[1]), rescale(c[2])))
            .collect(),
    };
    GrayImage::new(width, height, pixels)
}
