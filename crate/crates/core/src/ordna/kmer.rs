//! k-mer counting.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::Seq;

/// Multiset of k-mers, k ≤ 16. A k-mer's index reads its first base as the
/// most significant base-4 digit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KmerProfile {
    pub k: usize,
    /// `(index, multiplicity)`, sorted by index, multiplicities positive.
    pub counts: Vec<(u32, u32)>,
    /// Reads shorter than `k`.
    pub skipped: usize,
}

impl KmerProfile {
    pub fn from_counts(k: usize, counts: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (idx, c) in counts {
            if c > 0 {
                *map.entry(idx).or_insert(0u32) += c;
            }
        }
        Self {
            k,
            counts: map.into_iter().collect(),
            skipped: 0,
        }
    }

    /// Total multiplicity `m`.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&(_, c)| c as u64).sum()
    }

    /// Number of distinct k-mers `s`.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn kmer_profile(reads: &[Seq], k: usize) -> KmerProfile {
    assert!((1..=16).contains(&k), "k must be in 1..=16");
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    let mut skipped = 0;
    let kmask = if k == 16 {
        u32::MAX
    } else {
        (1u32 << (2 * k)) - 1
    };
    for read in reads {
        if read.len() < k {
            skipped += 1;
            continue;
        }
        let mut idx = 0u32;
        for j in 0..read.len() {
            idx = ((idx << 2) | read.base(j) as u32) & kmask;
            if j + 1 >= k {
                *map.entry(idx).or_insert(0) += 1;
            }
        }
    }
    KmerProfile {
        k,
        counts: map.into_iter().collect(),
        skipped,
    }
}
