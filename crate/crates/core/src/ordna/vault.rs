//! Code-offset vaults over RS(255, 32).

use alloc::vec::Vec;

use rand::Rng;

use super::SKETCH_LEN;
use crate::codes::{DecodeOutcome, ReedSolomon};
use crate::framework::{CfError, Output};

/// Message length of the vault code, in bytes.
pub const KEY_LEN: usize = 32;

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn check(w: &[u8]) -> Result<(), CfError> {
    if w.len() == SKETCH_LEN {
        Ok(())
    } else {
        Err(CfError::Parameter(alloc::format!(
            "vault vector must have {SKETCH_LEN} symbols, got {}",
            w.len()
        )))
    }
}

/// Locks a fresh random key under `w`: `h = RS(z) + w`.
pub fn vault_lock<R: Rng + ?Sized>(
    rs: &ReedSolomon,
    w: &[u8],
    rng: &mut R,
) -> Result<(Vec<u8>, Output), CfError> {
    check(w)?;
    let mut z = [0u8; KEY_LEN];
    rng.fill(&mut z[..]);
    let c = rs.encode(&z)?;
    Ok((xor(&c, w), Output(z.to_vec())))
}

/// Decodes `h − w'`; fails beyond 111 differing symbols.
pub fn vault_unlock(rs: &ReedSolomon, h: &[u8], w: &[u8]) -> Result<Output, CfError> {
    check(w)?;
    check(h)?;
    match rs.decode(&xor(h, w))? {
        DecodeOutcome::Decoded { message, .. } => Ok(Output(message)),
        DecodeOutcome::Failure => Err(CfError::ReconstructFailure("vault decoding failed".into())),
    }
}

/// Vaults for every run of a sketch, all locking the same key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VaultSet {
    pub helpers: Vec<u8>,
}

impl VaultSet {
    pub fn lock<R: Rng + ?Sized>(
        rs: &ReedSolomon,
        runs: &[&[u8]],
        rng: &mut R,
    ) -> Result<(Self, Output), CfError> {
        let mut z = [0u8; KEY_LEN];
        rng.fill(&mut z[..]);
        let c = rs.encode(&z)?;
        let mut helpers = Vec::with_capacity(runs.len() * SKETCH_LEN);
        for w in runs {
            check(w)?;
            helpers.extend(c.iter().zip(w.iter()).map(|(a, b)| a ^ b));
        }
        Ok((Self { helpers }, Output(z.to_vec())))
    }

    pub fn runs(&self) -> usize {
        self.helpers.len() / SKETCH_LEN
    }

    /// Unlocks every run and returns the most frequent key if at least
    /// `theta` of the runs produced it. Stops early once that is out of
    /// reach.
    pub fn unlock(
        &self,
        rs: &ReedSolomon,
        runs: &[&[u8]],
        theta: f64,
    ) -> Result<(Output, f64), CfError> {
        let n = self.runs();
        if runs.len() != n || self.helpers.len() != n * SKETCH_LEN {
            return Err(CfError::HelperData(alloc::format!(
                "helper data holds {n} runs, response has {}",
                runs.len()
            )));
        }
        let needed = libm::ceil(theta * n as f64).max(1.0) as usize;
        let mut found: Vec<(Vec<u8>, usize)> = Vec::new();
        for (i, w) in runs.iter().enumerate() {
            let h = &self.helpers[i * SKETCH_LEN..(i + 1) * SKETCH_LEN];
            if let Ok(Output(z)) = vault_unlock(rs, h, w) {
                match found.iter_mut().find(|(v, _)| *v == z) {
                    Some(entry) => entry.1 += 1,
                    None => found.push((z, 1)),
                }
            }
            let best = found.iter().map(|f| f.1).max().unwrap_or(0);
            if best + (n - i - 1) < needed {
                return Err(CfError::ReconstructFailure(alloc::format!(
                    "at most {} of {n} runs can agree, {needed} needed",
                    best + (n - i - 1)
                )));
            }
        }
        let (z, count) = found
            .into_iter()
            .max_by_key(|f| f.1)
            .expect("the early exit guarantees a decoded run");
        Ok((Output(z), count as f64 / n as f64))
    }
}
