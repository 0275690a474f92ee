use thiserror::Error;

/// Errors produced by image construction, PGM decoding and the filter stages.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer holds {actual} values but {width}x{height} needs {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bad PGM magic {0:?}, expected \"P5\"")]
    BadMagic(String),

    #[error("ASCII PGM (P2) is not supported, convert to binary P5")]
    AsciiPgm,

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u64),

    #[error("truncated PGM raster: expected {expected} bytes, found {actual}")]
    TruncatedRaster { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left_width: a.0,
            left_height: a.1,
            right_width: b.0,
            right_height: b.1,
        })
    }
}
