//! Error-correcting codes used by the extraction algorithms.
//!
//! * [`hamming`]: the perfect (7,4,3) Hamming code of the dye scheme.
//! * [`rs`]: Reed-Solomon RS(255, 32, 224) over GF(256) for the orDNA vault.
//! * [`bch`]: narrow-sense binary BCH codes of length 2^m - 1 for GSE.
//!
//! Decoders are bounded-distance: a word within distance `t` of a codeword
//! decodes to it, anything else yields [`DecodeOutcome::Failure`] or, rarely,
//! a wrong codeword.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub mod bch;
pub mod gf2m;
pub mod hamming;
pub mod rs;

pub use bch::{bch_make, Bch, ShortenedBch};
pub use hamming::Hamming74;
pub use rs::ReedSolomon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeFamily {
    Hamming74,
    Rs255,
    Bch,
}

/// Parameters of a block code, in symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
}

impl CodeSpec {
    pub const fn hamming74() -> Self {
        Self {
            family: CodeFamily::Hamming74,
            n: 7,
            k: 4,
            d: 3,
            t: 1,
        }
    }

    pub const fn rs255() -> Self {
        Self {
            family: CodeFamily::Rs255,
            n: 255,
            k: 32,
            d: 224,
            t: 111,
        }
    }

    /// Redundancy `n - k`.
    pub const fn redundancy(&self) -> usize {
        self.n - self.k
    }
}

/// Result of a bounded-distance decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome<M> {
    /// A codeword within distance `t` was found.
    Decoded { message: M, corrected: usize },
    /// No codeword within distance `t`.
    Failure,
}

impl<M> DecodeOutcome<M> {
    pub fn message(self) -> Option<M> {
        match self {
            Self::Decoded { message, .. } => Some(message),
            Self::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Self::Failure)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodecError {
    Length {
        expected: usize,
        got: usize,
    },
    Symbol {
        index: usize,
        value: u8,
    },
    Parameter(String),
    /// `t` cannot be reached at this length; carries the reachable values.
    Infeasible {
        n: usize,
        t: usize,
        achievable: Vec<usize>,
    },
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Length { expected, got } => {
                write!(f, "expected {expected} symbols, got {got}")
            }
            Self::Symbol { index, value } => {
                write!(f, "symbol {value} at index {index} is outside the alphabet")
            }
            Self::Parameter(msg) => write!(f, "invalid code parameters: {msg}"),
            Self::Infeasible { n, t, achievable } => write!(
                f,
                "no BCH code of length {n} corrects {t} errors; achievable t: {achievable:?}"
            ),
        }
    }
}

impl core::error::Error for CodecError {}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<(), CodecError> {
    if expected == got {
        Ok(())
    } else {
        Err(CodecError::Length { expected, got })
    }
}

/// Number of positions where two words differ.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}
