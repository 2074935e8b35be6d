//! The orDNA chemical function system.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};

use super::pcr::amplified;
use super::vault::VaultSet;
use super::{kmer_profile, minhash_sketch, select_pcr, OrdnaEval, OrdnaProfile, Seq, Sketch};
use crate::codes::ReedSolomon;
use crate::framework::{CfError, Output, Scheme, SchemeTag};
use crate::rng::SimRng;

/// Per-evaluation byte-corruption rate `p` such that two independent
/// evaluations of the same clean sketch disagree on a coordinate with
/// probability `pair`: `1 − [(1 − p)² + p²/255] = pair`. Corrupted bytes
/// take a uniformly random different value.
pub fn per_evaluation_byte_rate(pair: f64) -> Result<f64, CfError> {
    let a = 256.0 / 255.0;
    if !(0.0..=1.0 / a).contains(&pair) {
        return Err(CfError::Parameter(alloc::format!(
            "pairwise byte-error rate {pair} outside [0, 255/256]"
        )));
    }
    Ok((1.0 - libm::sqrt(1.0 - a * pair)) / a)
}

/// Byte noise attached to a measurement and applied after sketching.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SketchNoise {
    pub rate: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrdnaResponse {
    pub reads: Vec<Seq>,
    pub noise: SketchNoise,
}

/// Returns `true` for reads to discard as contamination.
pub type ReadFilter = fn(&Seq) -> bool;

/// Extraction parameters: k-mer length, sketch key, vault runs and the
/// agreement threshold over runs.
#[derive(Clone, Copy, Debug)]
pub struct OrdnaExtract {
    pub k: usize,
    pub sketch_seed: u64,
    pub runs: usize,
    pub theta: f64,
    pub filter: Option<ReadFilter>,
}

impl Default for OrdnaExtract {
    fn default() -> Self {
        Self {
            k: 8,
            sketch_seed: 0x6d69_6e68_6173_6821,
            runs: 30,
            theta: 0.5,
            filter: None,
        }
    }
}

impl PartialEq for OrdnaExtract {
    // filters compare by address
    fn eq(&self, other: &Self) -> bool {
        let addr = |f: Option<ReadFilter>| f.map(|f| f as usize);
        self.k == other.k
            && self.sketch_seed == other.sketch_seed
            && self.runs == other.runs
            && self.theta == other.theta
            && addr(self.filter) == addr(other.filter)
    }
}

impl OrdnaExtract {
    /// Filter → k-mers → clean sketch.
    pub fn clean_sketch(&self, reads: &[Seq]) -> Result<Sketch, CfError> {
        let kept: Vec<Seq> = match self.filter {
            Some(reject) => reads.iter().filter(|r| !reject(r)).copied().collect(),
            None => reads.to_vec(),
        };
        let profile = kmer_profile(&kept, self.k);
        minhash_sketch(&profile, self.sketch_seed, self.runs)
    }

    /// The sketch as measured, including byte noise.
    pub fn sketch(&self, response: &OrdnaResponse) -> Result<Sketch, CfError> {
        let mut sketch = self.clean_sketch(&response.reads)?;
        apply_byte_noise(&mut sketch, response.noise);
        Ok(sketch)
    }
}

pub(crate) fn apply_byte_noise(sketch: &mut Sketch, noise: SketchNoise) {
    if noise.rate == 0.0 {
        return;
    }
    let mut rng = SimRng::seed_from_u64(noise.seed);
    for b in sketch.bytes_mut() {
        if rng.random_bool(noise.rate) {
            *b ^= rng.random_range(1..=255u8);
        }
    }
}

fn runs_of(sketch: &Sketch) -> Vec<&[u8]> {
    (0..sketch.runs()).map(|i| sketch.run(i)).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct Ordna;

impl Scheme for Ordna {
    const TAG: SchemeTag = SchemeTag::Ordna;

    type Profile = OrdnaProfile;
    type Challenge = Seq;
    type Response = OrdnaResponse;
    type EvalParams = OrdnaEval;
    type ExtractParams = OrdnaExtract;

    fn evaluate(
        profile: &OrdnaProfile,
        params: &OrdnaEval,
        x: &Seq,
        rng: &mut SimRng,
    ) -> Result<OrdnaResponse, CfError> {
        params.validate()?;
        let reads = select_pcr(profile, x, params, rng)?;
        let rate = per_evaluation_byte_rate(params.noise.sketch_byte_error)?;
        Ok(OrdnaResponse {
            reads,
            noise: SketchNoise {
                rate,
                seed: rng.random(),
            },
        })
    }

    /// Noise-free reads of the exactly matching molecules, shared round
    /// robin.
    fn evaluate_reference(
        profile: &OrdnaProfile,
        params: &OrdnaEval,
        x: &Seq,
    ) -> Result<OrdnaResponse, CfError> {
        if x.len() != profile.challenge_len() {
            return Err(CfError::InvalidChallenge(
                "challenge length does not match the pool".into(),
            ));
        }
        let exact: Vec<u64> = amplified(profile, x, Default::default())
            .into_iter()
            .map(|h| h.0)
            .collect();
        if exact.is_empty() {
            return Err(CfError::EmptyResponse);
        }
        let reads = (0..params.reads.max(1))
            .map(|r| profile.output(exact[r % exact.len()]))
            .collect();
        Ok(OrdnaResponse {
            reads,
            noise: SketchNoise { rate: 0.0, seed: 0 },
        })
    }

    fn extract_setup(
        params: &OrdnaExtract,
        response: &OrdnaResponse,
        rng: &mut SimRng,
    ) -> Result<(Output, Vec<u8>), CfError> {
        let sketch = params.sketch(response)?;
        let rs = ReedSolomon::rs255();
        let (vaults, z) = VaultSet::lock(&rs, &runs_of(&sketch), rng)?;
        Ok((z, vaults.helpers))
    }

    fn extract_reconstruct(
        params: &OrdnaExtract,
        response: &OrdnaResponse,
        payload: &[u8],
    ) -> Result<Output, CfError> {
        let sketch = params.sketch(response).map_err(|e| match e {
            CfError::EmptyResponse => {
                CfError::ReconstructFailure("no k-mers in the response".into())
            }
            other => other,
        })?;
        let vaults = VaultSet {
            helpers: payload.to_vec(),
        };
        let rs = ReedSolomon::rs255();
        vaults
            .unlock(&rs, &runs_of(&sketch), params.theta)
            .map(|(z, _)| z)
    }

    fn encode_challenge(x: &Seq) -> Vec<u8> {
        x.to_bytes()
    }

    fn decode_challenge(bytes: &[u8]) -> Result<Seq, CfError> {
        Seq::from_bytes(bytes)
    }
}
