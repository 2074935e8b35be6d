//! Weighted MinHash sketches.
//!
//! Coordinate `c` of a sketch is keyed by `key = hash(seed, c)`. A k-mer of
//! multiplicity `W` stands for the replicas `(kmer, 1..=W)`, each with an
//! independent uniform priority; the coordinate holds the 8-bit digest of
//! the replica with the smallest priority. Only the running minima
//! (records) of a k-mer's replica sequence are generated: the gap to the
//! next record after value `u` is geometric with parameter `u`, and the new
//! record is uniform on `(0, u)`. Replica priorities therefore agree across
//! profiles, and two profiles pick the same replica with probability equal
//! to their weighted Jaccard similarity.

use alloc::vec;
use alloc::vec::Vec;

use super::KmerProfile;
use crate::framework::CfError;
use crate::rng::{hash2, hash3, unit_open};

/// Coordinates per run.
pub const SKETCH_LEN: usize = 255;

const GAP_SALT: u64 = 0x6761_7073;
const VALUE_SALT: u64 = 0x7661_6c75;
const DIGEST_SALT: u64 = 0x6469_6765;

/// `runs × 255` digests, run-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sketch {
    runs: usize,
    data: Vec<u8>,
}

impl Sketch {
    pub fn from_runs(runs: usize, data: Vec<u8>) -> Result<Self, CfError> {
        if data.len() != runs * SKETCH_LEN {
            return Err(CfError::Parameter(alloc::format!(
                "sketch of {runs} runs needs {} bytes, got {}",
                runs * SKETCH_LEN,
                data.len()
            )));
        }
        Ok(Self { runs, data })
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn run(&self, i: usize) -> &[u8] {
        &self.data[i * SKETCH_LEN..(i + 1) * SKETCH_LEN]
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn bytes_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    /// Number of coordinates that differ.
    pub fn distance(&self, other: &Sketch) -> usize {
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Smallest replica priority of a k-mer with multiplicity `w` under `key`,
/// and the replica achieving it.
fn weighted_min(key: u64, kmer: u32, w: u32) -> (f64, u32) {
    let k = kmer as u64;
    let mut r: u32 = 1;
    let mut u = unit_open(hash3(key, k, 1));
    let w = w as f64;
    loop {
        let v = unit_open(hash3(key ^ GAP_SALT, k, r as u64));
        let gap = libm::ceil(libm::log(v) / libm::log1p(-u)).max(1.0);
        if r as f64 + gap > w {
            return (u, r);
        }
        r += gap as u32;
        u *= unit_open(hash3(key ^ VALUE_SALT, k, r as u64));
    }
}

/// Winning `(kmer, replica)` at one coordinate. Ties break on the k-mer.
fn winner(key: u64, profile: &KmerProfile) -> (u32, u32) {
    let mut best = (f64::INFINITY, 0u32, 0u32);
    for &(kmer, w) in &profile.counts {
        let (u, r) = weighted_min(key, kmer, w);
        if u < best.0 || (u == best.0 && kmer < best.1) {
            best = (u, kmer, r);
        }
    }
    (best.1, best.2)
}

fn coordinate_key(seed: u64, coord: usize) -> u64 {
    hash2(seed, coord as u64)
}

fn digest(key: u64, kmer: u32, replica: u32) -> u8 {
    hash3(key ^ DIGEST_SALT, kmer as u64, replica as u64) as u8
}

/// `runs × 255` sketch of `profile` under `seed`.
pub fn minhash_sketch(profile: &KmerProfile, seed: u64, runs: usize) -> Result<Sketch, CfError> {
    if profile.is_empty() {
        return Err(CfError::EmptyResponse);
    }
    let mut data = vec![0u8; runs * SKETCH_LEN];
    for (c, slot) in data.iter_mut().enumerate() {
        let key = coordinate_key(seed, c);
        let (kmer, r) = winner(key, profile);
        *slot = digest(key, kmer, r);
    }
    Ok(Sketch { runs, data })
}

/// The winning `(kmer, replica)` per coordinate, before digesting.
pub fn minhash_signature(
    profile: &KmerProfile,
    seed: u64,
    coords: usize,
) -> Result<Vec<(u32, u32)>, CfError> {
    if profile.is_empty() {
        return Err(CfError::EmptyResponse);
    }
    Ok((0..coords)
        .map(|c| winner(coordinate_key(seed, c), profile))
        .collect())
}

/// `Σ min / Σ max` over the union of supports.
pub fn weighted_jaccard(a: &KmerProfile, b: &KmerProfile) -> f64 {
    let (mut num, mut den) = (0u64, 0u64);
    let (mut i, mut j) = (0, 0);
    while i < a.counts.len() || j < b.counts.len() {
        let ka = a.counts.get(i).map(|c| c.0);
        let kb = b.counts.get(j).map(|c| c.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                let (ca, cb) = (a.counts[i].1 as u64, b.counts[j].1 as u64);
                num += ca.min(cb);
                den += ca.max(cb);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                den += a.counts[i].1 as u64;
                i += 1;
            }
            (Some(_), None) => {
                den += a.counts[i].1 as u64;
                i += 1;
            }
            _ => {
                den += b.counts[j].1 as u64;
                j += 1;
            }
        }
    }
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}
