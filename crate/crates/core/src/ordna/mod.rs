//! Operable random DNA (orDNA).
//!
//! A pool of random molecules, each with random input parts (primer binding
//! sites for selection PCR) and a random output part. A challenge is an
//! input sequence; selection PCR amplifies the molecules whose inputs match
//! and the response is a set of sequencing reads of their outputs.
//! Extraction turns reads into k-mer counts, sketches them with weighted
//! MinHash and unlocks Reed-Solomon code-offset vaults.
//!
//! Pools are never stored: molecule `i` is a pure function of
//! `(seed, i)`, so a pool is fully described by its generation parameters.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::framework::CfError;
use crate::rng::hash3;

mod kmer;
mod minhash;
mod pcr;
mod scheme;
mod vault;

pub use kmer::{kmer_profile, KmerProfile};
pub use minhash::{minhash_signature, minhash_sketch, weighted_jaccard, Sketch, SKETCH_LEN};
pub use pcr::{select_pcr, CrossPriming, NoiseModel, OrdnaEval};
pub use scheme::{
    per_evaluation_byte_rate, Ordna, OrdnaExtract, OrdnaResponse, ReadFilter, SketchNoise,
};
pub use vault::{vault_lock, vault_unlock, VaultSet, KEY_LEN};

/// Output part length per stage, in nucleotides.
pub const OUTPUT_NT_PER_STAGE: usize = 21;
/// Length of each extra input part added per additional stage.
pub const EXTRA_INPUT_NT: usize = 9;
/// Smallest pool accepted by [`ordna_gen`].
pub const MIN_POOL: u64 = 1000;

/// A nucleotide string of at most 64 nt, 2 bits per base (A=0, C=1, G=2,
/// T=3), base `j` in bits `2j..2j+2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seq {
    bits: u128,
    len: u8,
}

const BASES: [char; 4] = ['A', 'C', 'G', 'T'];

fn mask(len: usize) -> u128 {
    if len >= 64 {
        u128::MAX
    } else {
        (1u128 << (2 * len)) - 1
    }
}

impl Seq {
    pub const MAX_LEN: usize = 64;

    /// Takes the low `2 len` bits of `bits`.
    pub fn from_bits(bits: u128, len: usize) -> Self {
        assert!(len <= Self::MAX_LEN, "sequence longer than 64 nt");
        Self {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn base(&self, j: usize) -> u8 {
        ((self.bits >> (2 * j)) & 3) as u8
    }

    /// Number of differing bases; lengths must match.
    pub fn hamming(&self, other: &Seq) -> u32 {
        debug_assert_eq!(self.len, other.len);
        let x = self.bits ^ other.bits;
        // a base differs iff either of its two bits differs
        let lo = x & 0x5555_5555_5555_5555_5555_5555_5555_5555;
        let hi = (x >> 1) & 0x5555_5555_5555_5555_5555_5555_5555_5555;
        (lo | hi).count_ones()
    }

    /// `self[start..start+len]`.
    pub fn slice(&self, start: usize, len: usize) -> Seq {
        Seq::from_bits(self.bits >> (2 * start), len)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Seq) -> Seq {
        let len = self.len() + other.len();
        Seq::from_bits(self.bits | (other.bits << (2 * self.len())), len)
    }

    pub fn with_base(&self, j: usize, b: u8) -> Seq {
        let cleared = self.bits & !(3u128 << (2 * j));
        Seq {
            bits: cleared | ((b as u128 & 3) << (2 * j)),
            len: self.len,
        }
    }

    /// Canonical bytes: `[len, packed…]`, four bases per byte starting at the
    /// low bits; unused high bits are zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len().div_ceil(4);
        let mut out = Vec::with_capacity(1 + n);
        out.push(self.len);
        out.extend((0..n).map(|i| (self.bits >> (8 * i)) as u8));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Seq, CfError> {
        let bad = |m: &str| CfError::InvalidChallenge(alloc::format!("nucleotide bytes: {m}"));
        let (&len, packed) = bytes.split_first().ok_or_else(|| bad("empty"))?;
        let len = len as usize;
        if len > Self::MAX_LEN {
            return Err(bad("longer than 64 nt"));
        }
        if packed.len() != len.div_ceil(4) {
            return Err(bad("length prefix does not match payload"));
        }
        let bits = packed
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &b)| acc | ((b as u128) << (8 * i)));
        if bits & !mask(len) != 0 {
            return Err(bad("non-zero padding"));
        }
        Ok(Seq {
            bits,
            len: len as u8,
        })
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len() {
            fmt::Write::write_char(f, BASES[self.base(j) as usize])?;
        }
        Ok(())
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq({self})")
    }
}

impl FromStr for Seq {
    type Err = CfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > Self::MAX_LEN {
            return Err(CfError::InvalidChallenge("longer than 64 nt".into()));
        }
        let mut bits = 0u128;
        for (j, c) in s.chars().enumerate() {
            let b = match c.to_ascii_uppercase() {
                'A' => 0,
                'C' => 1,
                'G' => 2,
                'T' => 3,
                other => {
                    return Err(CfError::InvalidChallenge(alloc::format!(
                        "'{other}' is not a nucleotide"
                    )))
                }
            };
            bits |= (b as u128) << (2 * j);
        }
        Ok(Seq {
            bits,
            len: s.len() as u8,
        })
    }
}

/// Lengths of the two first-stage input parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Layout {
    /// 6 + 7 nt, a 13-nt challenge.
    #[default]
    L13,
    /// 9 + 10 nt, a 19-nt challenge.
    L19,
}

impl Layout {
    pub fn parts(self) -> (usize, usize) {
        match self {
            Self::L13 => (6, 7),
            Self::L19 => (9, 10),
        }
    }

    pub fn first_stage_len(self) -> usize {
        let (a, b) = self.parts();
        a + b
    }
}

/// Generation parameters; also the pool's complete description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrdnaConfig {
    pub seed: u64,
    pub pool_size: u64,
    pub stages: u32,
    pub layout: Layout,
}

impl OrdnaConfig {
    pub fn new(seed: u64, pool_size: u64) -> Self {
        Self {
            seed,
            pool_size,
            stages: 1,
            layout: Layout::L13,
        }
    }
}

/// One materialized molecule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdnaMolecule {
    pub input1: Seq,
    pub input2: Seq,
    pub extra_inputs: Vec<Seq>,
    pub output: Seq,
    /// Blunted molecules are never amplified; generated pools contain none.
    pub amplifiable: bool,
}

/// A lazily materialized random pool.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrdnaProfile {
    config: OrdnaConfig,
    input_len: usize,
    output_len: usize,
}

const INPUT_WORD: u64 = 0;
const OUTPUT_WORD: u64 = 2;

/// Builds the pool described by `config`.
pub fn ordna_gen(config: OrdnaConfig) -> Result<OrdnaProfile, CfError> {
    if config.pool_size < MIN_POOL {
        return Err(CfError::Parameter(alloc::format!(
            "pool size {} below the minimum {MIN_POOL}",
            config.pool_size
        )));
    }
    if config.stages == 0 {
        return Err(CfError::Parameter("at least one stage is required".into()));
    }
    let extra = 2 * (config.stages as usize - 1);
    let input_len = config.layout.first_stage_len() + EXTRA_INPUT_NT * extra;
    let output_len = OUTPUT_NT_PER_STAGE * config.stages as usize;
    if input_len > Seq::MAX_LEN || output_len > Seq::MAX_LEN {
        return Err(CfError::Parameter(alloc::format!(
            "{} stages exceed the 64-nt sequence limit",
            config.stages
        )));
    }
    Ok(OrdnaProfile {
        config,
        input_len,
        output_len,
    })
}

impl OrdnaProfile {
    pub fn config(&self) -> OrdnaConfig {
        self.config
    }

    pub fn pool_size(&self) -> u64 {
        self.config.pool_size
    }

    /// Challenge length: all input parts concatenated.
    pub fn challenge_len(&self) -> usize {
        self.input_len
    }

    pub fn output_len(&self) -> usize {
        self.output_len
    }

    fn word_pair(&self, i: u64, first: u64) -> u128 {
        let lo = hash3(self.config.seed, i, first) as u128;
        let hi = hash3(self.config.seed, i, first + 1) as u128;
        lo | (hi << 64)
    }

    /// Concatenated input parts of molecule `i`.
    pub fn inputs(&self, i: u64) -> Seq {
        if self.input_len <= 32 {
            Seq::from_bits(
                hash3(self.config.seed, i, INPUT_WORD) as u128,
                self.input_len,
            )
        } else {
            Seq::from_bits(self.word_pair(i, INPUT_WORD), self.input_len)
        }
    }

    pub fn output(&self, i: u64) -> Seq {
        Seq::from_bits(self.word_pair(i, OUTPUT_WORD), self.output_len)
    }

    pub fn molecule(&self, i: u64) -> OrdnaMolecule {
        let inputs = self.inputs(i);
        let (a, b) = self.config.layout.parts();
        let extra = (0..2 * (self.config.stages as usize - 1))
            .map(|e| inputs.slice(a + b + EXTRA_INPUT_NT * e, EXTRA_INPUT_NT))
            .collect();
        OrdnaMolecule {
            input1: inputs.slice(0, a),
            input2: inputs.slice(a, b),
            extra_inputs: extra,
            output: self.output(i),
            amplifiable: true,
        }
    }

    /// A challenge that selects an existing molecule, uniform over the pool.
    pub fn sample_challenge<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Seq {
        self.inputs(rng.random_range(0..self.config.pool_size))
    }

    /// A uniformly random input sequence of the right length.
    pub fn random_challenge<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Seq {
        Seq::from_bits(rng.random::<u128>(), self.input_len)
    }
}

#[cfg(test)]
mod tests;
