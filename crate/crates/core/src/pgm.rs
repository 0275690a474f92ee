//! Binary PGM (P5) with maxval 255.
//!
//! Reading accepts `#` comments and arbitrary whitespace between header
//! tokens. Writing always emits the canonical `P5\n<w> <h>\n255\n` header.

use std::fs;
use std::io;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Decodes a binary PGM stream. Bytes after the raster are ignored.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };

    let magic = cur.token()?;
    match magic {
        b"P5" => {}
        b"P2" => return Err(Error::AsciiPgm),
        other => return Err(Error::BadMagic(String::from_utf8_lossy(other).into_owned())),
    }

    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage {
            width: width as usize,
            height: height as usize,
        });
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }

    // Exactly one whitespace byte separates maxval from the raster.
    match cur.bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }

    let (width, height) = (width as usize, height as usize);
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("dimensions overflow".into()))?;
    let raster = &bytes[cur.pos..];
    if raster.len() < expected {
        return Err(Error::TruncatedRaster {
            expected,
            actual: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

/// Encodes `img` as canonical binary PGM.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

/// Errors from the file helpers: either I/O or decoding.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Decode { path: String, source: Error },
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> std::result::Result<GrayImage, FileError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_pgm(&bytes).map_err(|source| FileError::Decode {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_pgm_file(
    path: impl AsRef<Path>,
    img: &GrayImage,
) -> std::result::Result<(), FileError> {
    let path = path.as_ref();
    fs::write(path, write_pgm(img)).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader("unexpected end of header".into()));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| {
                Error::MalformedHeader(format!(
                    "{what} is not a number: {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}
