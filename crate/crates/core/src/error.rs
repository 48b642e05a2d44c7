use thiserror::Error;

use crate::MAX_SCALE;

#[derive(Debug, Error)]
pub enum WfError {
    #[error("index 0 has no binary characters")]
    ZeroIndex,

    #[error("index {index} lies outside band [2^{band}, 2^({band}+1))")]
    OutOfBand { index: u64, band: u32 },

    #[error("band exponent {0} is out of range")]
    InvalidBand(u32),

    #[error("tail position {position} out of range 1..={terms}")]
    TailOutOfRange { position: usize, terms: usize },

    #[error("scale {0} exceeds the maximum of {MAX_SCALE}")]
    ScaleTooLarge(u32),

    #[error("scale {scale} is below the minimum of {min}")]
    ScaleTooSmall { scale: u32, min: u32 },

    #[error("scale mismatch: {left} vs {right}")]
    ScaleMismatch { left: u32, right: u32 },

    #[error("coordinate {coordinate} out of range for scale {scale}")]
    CoordinateOutOfRange { coordinate: u32, scale: u32 },

    #[error("point index {index} out of range for scale {scale}")]
    PointOutOfRange { index: usize, scale: u32 },

    #[error("interval depth {depth} exceeds scale {scale}")]
    DepthOutOfRange { depth: u32, scale: u32 },

    #[error("order {order} out of range for scale {scale}")]
    OrderOutOfRange { order: u64, scale: u32 },

    #[error("exponent p must be positive, got {0}")]
    InvalidExponent(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("set for block endpoint {endpoint} needs scale >= {needed}, have {scale}")]
    Unresolvable {
        endpoint: u32,
        needed: u32,
        scale: u32,
    },

    #[error("index sequence is empty")]
    EmptySequence,

    #[error("index sequence must be strictly increasing and positive (offending index {0})")]
    BadSequence(u64),

    #[error("weight for index {index} is not positive ({weight})")]
    NonPositiveWeight { index: u64, weight: f64 },

    #[error("weight sequence must be positive and nondecreasing (band {0})")]
    WeightNotMonotone(usize),

    #[error("weight sequence has no entry for band {0}")]
    MissingWeight(u32),

    #[error("not a valid atom: {0}")]
    InvalidAtom(String),

    #[error("truncation at scale {0} keeps no terms")]
    EmptyTruncation(u32),

    #[error("index {index} is not in a band carried by the martingale")]
    BandNotCarried { index: u64 },

    #[error("evaluation paths disagree by {0:e}")]
    PathMismatch(f64),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, WfError>;
