//! The (7,4,3) Hamming code.
//!
//! Words are the low 7 bits of a `u8`. Bits 0..4 carry the message
//! (systematic) and bits 4..7 the parity:
//!
//! ```text
//! p0 = m0 ^ m1 ^ m3
//! p1 = m0 ^ m2 ^ m3
//! p2 = m1 ^ m2 ^ m3
//! ```

use super::{CodeSpec, CodecError};

#[derive(Clone, Copy, Debug, Default)]
pub struct Hamming74;

const fn bit(x: u8, i: u8) -> u8 {
    (x >> i) & 1
}

/// Syndrome -> position of the single flipped bit (or 0xFF for syndrome 0).
const SYNDROME_TO_POS: [u8; 8] = {
    let mut table = [0xFFu8; 8];
    let mut pos = 0u8;
    while pos < 7 {
        let s = syndrome(1 << pos);
        table[s as usize] = pos;
        pos += 1;
    }
    table
};

const fn parity(m: u8) -> u8 {
    let p0 = bit(m, 0) ^ bit(m, 1) ^ bit(m, 3);
    let p1 = bit(m, 0) ^ bit(m, 2) ^ bit(m, 3);
    let p2 = bit(m, 1) ^ bit(m, 2) ^ bit(m, 3);
    p0 | (p1 << 1) | (p2 << 2)
}

const fn syndrome(w: u8) -> u8 {
    parity(w & 0x0F) ^ (w >> 4)
}

impl Hamming74 {
    pub const fn spec(&self) -> CodeSpec {
        CodeSpec::hamming74()
    }

    pub fn encode(&self, message: u8) -> Result<u8, CodecError> {
        if message > 0x0F {
            return Err(CodecError::Symbol {
                index: 0,
                value: message,
            });
        }
        Ok(message | (parity(message) << 4))
    }

    /// Nearest-codeword decoding. The code is perfect, so every word is
    /// within distance 1 of exactly one codeword.
    pub fn decode(&self, word: u8) -> Result<u8, CodecError> {
        if word > 0x7F {
            return Err(CodecError::Symbol {
                index: 0,
                value: word,
            });
        }
        let s = syndrome(word);
        let fixed = if s == 0 {
            word
        } else {
            word ^ (1 << SYNDROME_TO_POS[s as usize])
        };
        Ok(fixed & 0x0F)
    }
}
