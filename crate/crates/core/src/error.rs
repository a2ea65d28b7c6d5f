use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bit length {ell} outside supported range [{min}, {max}]")]
    Size { ell: u32, min: u32, max: u32 },

    #[error("permutation has length {len}, expected 2^{ell} = {expected}")]
    Length { ell: u32, len: usize, expected: usize },

    #[error("not a permutation: value {value} at index {index} {reason}")]
    NotPermutation {
        index: usize,
        value: u32,
        reason: &'static str,
    },

    #[error("{0}")]
    Domain(&'static str),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}

pub(crate) fn check_ell(ell: u32, min: u32, max: u32) -> Result<()> {
    if ell < min || ell > max {
        Err(Error::Size { ell, min, max })
    } else {
        Ok(())
    }
}
