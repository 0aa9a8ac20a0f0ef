//! In-memory raster images, binary Netpbm (P5/P6) codecs, and a seeded
//! synthetic image generator.
//!
//! Samples are kept as exact integers on I/O; conversion to floating point
//! happens only inside the clustering kernel, so the codecs are lossless.

use crate::rng::SplitMix64;
use thiserror::Error;

/// Hard cap on total sample count; larger inputs are rejected outright
/// instead of risking index overflow.
pub const MAX_SAMPLES: u64 = i32::MAX as u64;

/// Largest uniform-noise amplitude accepted by [`generate_synthetic`].
pub const MAX_NOISE_AMPLITUDE: u16 = 64;

/// Image extent in pixels. Both dimensions are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub width: usize,
    pub height: usize,
}

impl Dims {
    pub fn new(width: usize, height: usize) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Errors constructing an [`Image`] or generating synthetic data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("unsupported channel count {0}: expected 1 or 3")]
    BadChannels(usize),
    #[error("unsupported maxval {0}: expected 255 or 65535")]
    BadMaxval(u32),
    #[error("image of {samples} samples exceeds the {MAX_SAMPLES}-sample limit")]
    TooLarge { samples: u64 },
    #[error("sample count mismatch: expected {expected}, got {actual}")]
    SampleCount { expected: usize, actual: usize },
    #[error("sample {value} at index {index} exceeds maxval {maxval}")]
    SampleRange {
        index: usize,
        value: u16,
        maxval: u16,
    },
    #[error("num_regions must be at least 1")]
    ZeroRegions,
    #[error("noise amplitude {0} exceeds the maximum of {MAX_NOISE_AMPLITUDE}")]
    NoiseTooLarge(u16),
    #[error("{requested} regions need distinct colors but only {available} exist")]
    TooManyRegions { requested: usize, available: usize },
}

/// A W x H x C raster of integer samples, row-major with interleaved
/// channels. Valid by construction: `samples.len() == width*height*channels`,
/// every sample is `<= maxval`, `channels` is 1 or 3, and `maxval` is 255
/// or 65535.
///
/// Images are immutable after construction and safe to share read-only
/// across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    maxval: u16,
    samples: Vec<u16>,
}

impl Image {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        maxval: u16,
        samples: Vec<u16>,
    ) -> Result<Self, ImageError> {
        let dims = Dims::new(width, height)?;
        if channels != 1 && channels != 3 {
            return Err(ImageError::BadChannels(channels));
        }
        if maxval != 255 && maxval != 65535 {
            return Err(ImageError::BadMaxval(maxval as u32));
        }
        let total = dims.area() as u64 * channels as u64;
        if total > MAX_SAMPLES {
            return Err(ImageError::TooLarge { samples: total });
        }
        let expected = total as usize;
        if samples.len() != expected {
            return Err(ImageError::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|&s| s > maxval) {
            return Err(ImageError::SampleRange {
                index,
                value: samples[index],
                maxval,
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            maxval,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn dims(&self) -> Dims {
        Dims {
            width: self.width,
            height: self.height,
        }
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    /// The channel values of the pixel at `(x, y)`.
    pub fn pixel(&self, x: usize, y: usize) -> &[u16] {
        let start = (y * self.width + x) * self.channels;
        &self.samples[start..start + self.channels]
    }
}

/// Netpbm decode errors. Each names the part of the stream it rejects.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("unsupported magic: expected binary P5 or P6")]
    Magic,
    #[error("invalid {field} in header: expected a positive integer")]
    Header { field: &'static str },
    #[error("maxval {value} out of range [1, 65535]")]
    MaxvalRange { value: u64 },
    #[error("missing whitespace separator after maxval")]
    Separator,
    #[error("sample payload truncated: need {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads one whitespace-separated decimal token; rejects missing,
    /// non-numeric, zero, and overlong values.
    fn read_number(&mut self, field: &'static str) -> Result<u64, PnmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start || self.pos - start > 10 {
            return Err(PnmError::Header { field });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: u64 = text.parse().map_err(|_| PnmError::Header { field })?;
        if value == 0 {
            return Err(PnmError::Header { field });
        }
        Ok(value)
    }
}

/// Decodes a binary Netpbm image: P5 (grayscale) or P6 (RGB), with
/// `#` comments permitted in the header. Samples are one byte each when
/// maxval <= 255, otherwise two bytes big-endian.
pub fn decode_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(PnmError::Magic),
    };
    let mut reader = HeaderReader { bytes, pos: 2 };
    let width = reader.read_number("width")?;
    let height = reader.read_number("height")?;
    let maxval = reader.read_number("maxval")?;
    if maxval > 65535 {
        return Err(PnmError::MaxvalRange { value: maxval });
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(reader.pos) {
        Some(b) if b.is_ascii_whitespace() => reader.pos += 1,
        _ => return Err(PnmError::Separator),
    }

    let total = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels as u64));
    let count = match total {
        Some(n) if n <= MAX_SAMPLES => n as usize,
        _ => {
            return Err(ImageError::TooLarge {
                samples: total.unwrap_or(u64::MAX),
            }
            .into())
        }
    };
    let bytes_per_sample = if maxval <= 255 { 1 } else { 2 };
    let payload = &bytes[reader.pos..];
    let needed = count * bytes_per_sample;
    if payload.len() < needed {
        return Err(PnmError::Truncated {
            expected: needed,
            actual: payload.len(),
        });
    }

    let samples: Vec<u16> = if bytes_per_sample == 1 {
        payload[..count].iter().map(|&b| b as u16).collect()
    } else {
        payload[..needed]
            .chunks_exact(2)
            .map(|pair| u16::from_be_bytes([pair[0], pair[1]]))
            .collect()
    };
    Ok(Image::new(
        width as usize,
        height as usize,
        channels,
        maxval as u16,
        samples,
    )?)
}

/// Encodes an image as binary P5 (1 channel) or P6 (3 channels).
/// `decode_pnm(encode_pnm(img))` reproduces `img` bit-exactly.
pub fn encode_pnm(img: &Image) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let header = format!(
        "{}\n{} {}\n{}\n",
        magic,
        img.width(),
        img.height(),
        img.maxval()
    );
    let mut out = Vec::with_capacity(
        header.len() + img.samples().len() * if img.maxval() <= 255 { 1 } else { 2 },
    );
    out.extend_from_slice(header.as_bytes());
    if img.maxval() <= 255 {
        out.extend(img.samples().iter().map(|&s| s as u8));
    } else {
        for &s in img.samples() {
            out.extend_from_slice(&s.to_be_bytes());
        }
    }
    out
}

/// Generates a deterministic 8-bit test image: `num_regions` axis-aligned
/// rectangular patches with pairwise-distinct base colors, plus uniform
/// integer noise in `[-noise_amplitude, +noise_amplitude]` clamped to
/// `[0, 255]`. Identical arguments produce bit-identical images.
pub fn generate_synthetic(
    dims: Dims,
    channels: usize,
    num_regions: usize,
    noise_amplitude: u16,
    seed: u64,
) -> Result<Image, ImageError> {
    if channels != 1 && channels != 3 {
        return Err(ImageError::BadChannels(channels));
    }
    if num_regions == 0 {
        return Err(ImageError::ZeroRegions);
    }
    if noise_amplitude > MAX_NOISE_AMPLITUDE {
        return Err(ImageError::NoiseTooLarge(noise_amplitude));
    }
    let available: usize = if channels == 1 { 256 } else { 1 << 24 };
    if num_regions > available {
        return Err(ImageError::TooManyRegions {
            requested: num_regions,
            available,
        });
    }

    let mut rng = SplitMix64::new(seed);
    let colors = draw_distinct_colors(&mut rng, channels, num_regions);

    // Region 0 is the background; later regions are painted over it in order.
    let mut samples = vec![0u16; dims.area() * channels];
    paint_rect(&mut samples, dims, channels, 0, 0, dims.width, dims.height, &colors[0]);
    for color in colors.iter().skip(1) {
        let x0 = rng.next_below(dims.width as u64) as usize;
        let y0 = rng.next_below(dims.height as u64) as usize;
        let w = 1 + rng.next_below((dims.width - x0) as u64) as usize;
        let h = 1 + rng.next_below((dims.height - y0) as u64) as usize;
        paint_rect(&mut samples, dims, channels, x0, y0, w, h, color);
    }

    if noise_amplitude > 0 {
        let amp = noise_amplitude as i32;
        let span = (2 * amp + 1) as u64;
        for s in &mut samples {
            let delta = rng.next_below(span) as i32 - amp;
            *s = (*s as i32 + delta).clamp(0, 255) as u16;
        }
    }

    Image::new(dims.width, dims.height, channels, 255, samples)
}

/// Draws `n` base colors from the generator; collisions fall back to a
/// linear probe over the packed color value, so colors are always distinct.
fn draw_distinct_colors(rng: &mut SplitMix64, channels: usize, n: usize) -> Vec<Vec<u16>> {
    let space: u64 = 1 << (8 * channels);
    let mut used = std::collections::HashSet::with_capacity(n);
    let mut colors = Vec::with_capacity(n);
    for _ in 0..n {
        let mut packed = rng.next_below(space);
        while !used.insert(packed) {
            packed = (packed + 1) % space;
        }
        let color: Vec<u16> = (0..channels)
            .map(|c| ((packed >> (8 * (channels - 1 - c))) & 0xFF) as u16)
            .collect();
        colors.push(color);
    }
    colors
}

#[allow(clippy::too_many_arguments)]
fn paint_rect(
    samples: &mut [u16],
    dims: Dims,
    channels: usize,
    x0: usize,
    y0: usize,
    w: usize,
    h: usize,
    color: &[u16],
) {
    for y in y0..y0 + h {
        for x in x0..x0 + w {
            let base = (y * dims.width + x) * channels;
            samples[base..base + channels].copy_from_slice(color);
        }
    }
}
