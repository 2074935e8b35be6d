//! Selection PCR and sequencing.

use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{OrdnaProfile, Seq};
use crate::framework::CfError;

/// Noise of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    /// Per-base substitution probability in sequencing reads.
    pub read_substitution: f64,
    /// Probability that two independent evaluations disagree on a sketch
    /// coordinate, injected after sketching.
    pub sketch_byte_error: f64,
}

impl NoiseModel {
    pub const NONE: Self = Self {
        read_substitution: 0.0,
        sketch_byte_error: 0.0,
    };
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            read_substitution: 0.0,
            sketch_byte_error: 0.17,
        }
    }
}

/// Primers also bind molecules whose inputs are within `kappa` mismatches
/// of the challenge, each mismatch scaling the yield by `attenuation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossPriming {
    pub kappa: u32,
    pub attenuation: f64,
}

impl Default for CrossPriming {
    fn default() -> Self {
        Self {
            kappa: 0,
            attenuation: 0.1,
        }
    }
}

/// Evaluation parameters of the orDNA chemical function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrdnaEval {
    pub reads: usize,
    pub noise: NoiseModel,
    pub cross: CrossPriming,
}

impl Default for OrdnaEval {
    fn default() -> Self {
        Self {
            reads: 32,
            noise: NoiseModel::default(),
            cross: CrossPriming::default(),
        }
    }
}

impl OrdnaEval {
    pub fn validate(&self) -> Result<(), CfError> {
        let rate = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(CfError::Parameter(alloc::format!(
                    "{name} {p} outside [0, 1]"
                )))
            }
        };
        rate("read substitution rate", self.noise.read_substitution)?;
        rate("sketch byte-error rate", self.noise.sketch_byte_error)?;
        rate("cross-priming attenuation", self.cross.attenuation)?;
        if self.reads == 0 {
            return Err(CfError::Parameter("at least one read is required".into()));
        }
        Ok(())
    }
}

/// Molecules amplified by `x` with their relative yields.
pub(crate) fn amplified(profile: &OrdnaProfile, x: &Seq, cross: CrossPriming) -> Vec<(u64, f64)> {
    let mut hits = Vec::new();
    for i in 0..profile.pool_size() {
        let d = profile.inputs(i).hamming(x);
        if d <= cross.kappa {
            hits.push((i, libm::pow(cross.attenuation, d as f64)));
        }
    }
    hits
}

fn substitute<R: Rng + ?Sized>(read: Seq, p: f64, rng: &mut R) -> Seq {
    if p == 0.0 {
        return read;
    }
    let mut out = read;
    for j in 0..read.len() {
        if rng.random_bool(p) {
            let b = (read.base(j) + rng.random_range(1..4u8)) & 3;
            out = out.with_base(j, b);
        }
    }
    out
}

/// Amplifies with challenge `x` and draws `params.reads` noisy reads.
pub fn select_pcr<R: Rng + ?Sized>(
    profile: &OrdnaProfile,
    x: &Seq,
    params: &OrdnaEval,
    rng: &mut R,
) -> Result<Vec<Seq>, CfError> {
    if x.len() != profile.challenge_len() {
        return Err(CfError::InvalidChallenge(alloc::format!(
            "challenge has {} nt, pool expects {}",
            x.len(),
            profile.challenge_len()
        )));
    }
    let hits = amplified(profile, x, params.cross);
    let yields: Vec<f64> = hits.iter().map(|h| h.1).collect();
    let pick = match WeightedIndex::new(&yields) {
        Ok(d) => d,
        Err(_) => return Err(CfError::EmptyResponse),
    };
    Ok((0..params.reads)
        .map(|_| {
            let molecule = hits[pick.sample(rng)].0;
            substitute(
                profile.output(molecule),
                params.noise.read_substitution,
                rng,
            )
        })
        .collect())
}
