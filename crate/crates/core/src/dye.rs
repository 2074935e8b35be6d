//! Fluorescent-dye reference scheme.
//!
//! A mixture of up to seven dyes answers an excitation wavelength with the
//! 7-bit presence pattern of emitted colors. Each bit is misread
//! independently with probability `p`. Mixtures are composed so that every
//! pattern is a Hamming(7,4) codeword; extraction decodes it to 4 bits and
//! needs no helper payload.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::codes::Hamming74;
use crate::framework::{CfError, Output, Scheme, SchemeTag};
use crate::rng::SimRng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyeProfile {
    /// Noise-free 7-bit pattern per wavelength.
    pub patterns: Vec<u8>,
}

impl DyeProfile {
    /// A mixture answering `wavelengths` challenges with random codewords.
    pub fn generate(wavelengths: usize, rng: &mut SimRng) -> Self {
        let h = Hamming74;
        let patterns = (0..wavelengths)
            .map(|_| h.encode(rng.random_range(0..16u8)).expect("nibble"))
            .collect();
        Self { patterns }
    }

    pub fn wavelengths(&self) -> usize {
        self.patterns.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyeParams {
    /// Per-bit misread probability.
    pub flip: f64,
}

impl DyeParams {
    pub fn new(flip: f64) -> Result<Self, CfError> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(CfError::Parameter(alloc::format!(
                "flip probability {flip} outside [0, 1]"
            )));
        }
        Ok(Self { flip })
    }
}

/// Hamming(7,4) decoding; no parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyeExtract;

#[derive(Clone, Copy, Debug)]
pub struct Dye;

/// `(1 − p)^7 + 7p(1 − p)^6`.
pub fn dye_robustness(p: f64) -> f64 {
    let q = 1.0 - p;
    libm::pow(q, 7.0) + 7.0 * p * libm::pow(q, 6.0)
}

fn pattern(profile: &DyeProfile, x: u8) -> Result<u8, CfError> {
    profile.patterns.get(x as usize).copied().ok_or_else(|| {
        CfError::InvalidChallenge(alloc::format!(
            "wavelength {x} not in 0..{}",
            profile.patterns.len()
        ))
    })
}

impl Scheme for Dye {
    const TAG: SchemeTag = SchemeTag::Dye;

    type Profile = DyeProfile;
    type Challenge = u8;
    type Response = u8;
    type EvalParams = DyeParams;
    type ExtractParams = DyeExtract;

    fn evaluate(
        profile: &DyeProfile,
        params: &DyeParams,
        x: &u8,
        rng: &mut SimRng,
    ) -> Result<u8, CfError> {
        let mut y = pattern(profile, *x)?;
        for bit in 0..7 {
            if rng.random_bool(params.flip) {
                y ^= 1 << bit;
            }
        }
        Ok(y)
    }

    fn evaluate_reference(profile: &DyeProfile, _: &DyeParams, x: &u8) -> Result<u8, CfError> {
        pattern(profile, *x)
    }

    fn extract_setup(_: &DyeExtract, y: &u8, _: &mut SimRng) -> Result<(Output, Vec<u8>), CfError> {
        Ok((Output(vec![Hamming74.decode(*y)?]), Vec::new()))
    }

    fn extract_reconstruct(_: &DyeExtract, y: &u8, payload: &[u8]) -> Result<Output, CfError> {
        if !payload.is_empty() {
            return Err(CfError::HelperData(
                "dye helper payload must be empty".into(),
            ));
        }
        Ok(Output(vec![Hamming74.decode(*y)?]))
    }

    fn encode_challenge(x: &u8) -> Vec<u8> {
        vec![*x]
    }

    fn decode_challenge(bytes: &[u8]) -> Result<u8, CfError> {
        match bytes {
            [x] => Ok(*x),
            _ => Err(CfError::InvalidChallenge(alloc::format!(
                "dye challenge is one byte, got {}",
                bytes.len()
            ))),
        }
    }
}
