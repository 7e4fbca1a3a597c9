//! 8-bit images and their PNG encodings.

use std::io::Cursor;

use crate::error::{Error, Result};
use crate::scene::FeatureClass;

/// Decoder allocation cap; large enough for any sane frame.
const DECODE_LIMIT_BYTES: usize = 256 << 20;

/// 8-bit sRGB image, rows top to bottom, RGB interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeautyImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl BeautyImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<BeautyImage> {
        if pixels.len() != 3 * width as usize * height as usize {
            return Err(Error::input(format!(
                "{} bytes for a {width}x{height} RGB image",
                pixels.len()
            )));
        }
        Ok(BeautyImage { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn digest(&self) -> String {
        crate::digest::sha256_hex(&self.pixels)
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        encode(self.width, self.height, png::ColorType::Rgb, &self.pixels)
    }
}

/// Binary mask for one feature class; each pixel is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMask {
    class: FeatureClass,
    width: u32,
    height: u32,
    bits: Vec<u8>,
}

impl ClassMask {
    pub fn empty(class: FeatureClass, width: u32, height: u32) -> ClassMask {
        ClassMask {
            class,
            width,
            height,
            bits: vec![0; width as usize * height as usize],
        }
    }

    pub fn from_bits(class: FeatureClass, width: u32, height: u32, bits: Vec<u8>) -> Result<ClassMask> {
        if bits.len() != width as usize * height as usize {
            return Err(Error::input(format!("{} values for a {width}x{height} mask", bits.len())));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::input("mask values must be 0 or 1"));
        }
        Ok(ClassMask {
            class,
            width,
            height,
            bits,
        })
    }

    pub fn class(&self) -> FeatureClass {
        self.class
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize] == 1
    }

    pub(crate) fn set(&mut self, idx: usize) {
        self.bits[idx] = 1;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// At least one pixel set.
    pub fn is_present(&self) -> bool {
        self.bits.contains(&1)
    }

    /// Grayscale PNG with values {0, 255}.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let data: Vec<u8> = self.bits.iter().map(|&b| b * 255).collect();
        encode(self.width, self.height, png::ColorType::Grayscale, &data)
    }

    /// Decodes a mask written by [`ClassMask::encode_png`]; any value other
    /// than 0 or 255 is rejected.
    pub fn decode_png(class: FeatureClass, bytes: &[u8]) -> Result<ClassMask> {
        let img = decode_gray8(bytes)?;
        let mut bits = Vec::with_capacity(img.data.len());
        for &v in &img.data {
            bits.push(match v {
                0 => 0,
                255 => 1,
                other => return Err(Error::Image(format!("mask value {other} is not 0 or 255"))),
            });
        }
        ClassMask::from_bits(class, img.width, img.height, bits)
    }
}

/// Decoded 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

fn encode(width: u32, height: u32, color: png::ColorType, data: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width, height);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(|e| Error::Image(e.to_string()))?;
        w.write_image_data(data).map_err(|e| Error::Image(e.to_string()))?;
        w.finish().map_err(|e| Error::Image(e.to_string()))?;
    }
    Ok(out)
}

fn decode_raw(bytes: &[u8]) -> Result<(u32, u32, png::ColorType, Vec<u8>)> {
    let mut dec = png::Decoder::new_with_limits(
        Cursor::new(bytes),
        png::Limits {
            bytes: DECODE_LIMIT_BYTES,
        },
    );
    dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = dec.read_info().map_err(|e| Error::Image(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Image("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::Image(e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Image(format!("unsupported bit depth {:?}", info.bit_depth)));
    }
    buf.truncate(info.buffer_size());
    Ok((info.width, info.height, info.color_type, buf))
}

/// Decodes any 8-bit grayscale PNG (alpha, if present, is dropped).
pub fn decode_gray8(bytes: &[u8]) -> Result<GrayImage> {
    let (width, height, color, buf) = decode_raw(bytes)?;
    let data = match color {
        png::ColorType::Grayscale => buf,
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).map(|p| p[0]).collect(),
        other => return Err(Error::Image(format!("expected grayscale PNG, got {other:?}"))),
    };
    Ok(GrayImage { width, height, data })
}

/// Decodes an RGB(A) or grayscale 8-bit PNG to RGB.
pub fn decode_rgb8(bytes: &[u8]) -> Result<BeautyImage> {
    let (width, height, color, buf) = decode_raw(bytes)?;
    let pixels = match color {
        png::ColorType::Rgb => buf,
        png::ColorType::Rgba => buf.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
        png::ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).flat_map(|p| [p[0], p[0], p[0]]).collect(),
        png::ColorType::Indexed => return Err(Error::Image("indexed PNG not expanded".into())),
    };
    BeautyImage::new(width, height, pixels)
}
