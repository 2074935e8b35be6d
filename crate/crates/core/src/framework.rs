//! Chemical functions, extraction and the protocols built on them.
//!
//! A [`Scheme`] bundles the profile, challenge and response types of one
//! chemical-function family with its noisy evaluation and its extraction
//! algorithm. [`ChemicalFunction`] is a handle on one profile instance;
//! [`Cfs`] composes it with extraction and offers setup, reconstruction,
//! authentication, key generation and robustness estimation.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;

use crate::codes::{hamming_distance, CodecError};
use crate::estimate::wilson_interval;
use crate::exactprob::ProbError;
use crate::rng::{derive_seed, stream_rng, SimRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfError {
    InvalidChallenge(String),
    /// The measurement returned nothing usable (e.g. no molecule amplified).
    EmptyResponse,
    SetupFailure(String),
    ReconstructFailure(String),
    Protocol(String),
    Parameter(String),
    HelperData(String),
}

impl fmt::Display for CfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidChallenge(m) => write!(f, "invalid challenge: {m}"),
            Self::EmptyResponse => f.write_str("empty response"),
            Self::SetupFailure(m) => write!(f, "setup failed: {m}"),
            Self::ReconstructFailure(m) => write!(f, "reconstruction failed: {m}"),
            Self::Protocol(m) => write!(f, "protocol error: {m}"),
            Self::Parameter(m) => write!(f, "invalid parameter: {m}"),
            Self::HelperData(m) => write!(f, "bad helper data: {m}"),
        }
    }
}

impl core::error::Error for CfError {}

impl From<CodecError> for CfError {
    fn from(e: CodecError) -> Self {
        Self::Parameter(alloc::format!("{e}"))
    }
}

impl From<ProbError> for CfError {
    fn from(e: ProbError) -> Self {
        Self::Parameter(alloc::format!("{e}"))
    }
}

/// Registry ids of the built-in schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum SchemeTag {
    Dye = 1,
    Ordna = 2,
    Gse = 3,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 3] = [Self::Dye, Self::Ordna, Self::Gse];

    pub fn id(self) -> &'static str {
        match self {
            Self::Dye => "dye",
            Self::Ordna => "ordna",
            Self::Gse => "gse",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.id() == id)
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|&t| t as u8 == b)
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// The stable extracted value `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Output(pub Vec<u8>);

impl Output {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Public helper data. `Empty` is the input of setup mode; everything a
/// setup produces is a tagged `Blob`, even with an empty payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum HelperData {
    #[default]
    Empty,
    Blob {
        scheme: SchemeTag,
        version: u16,
        payload: Vec<u8>,
    },
}

impl HelperData {
    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    /// `[tag, version (LE u16), payload…]`; `Empty` is the empty string.
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            Self::Empty => Vec::new(),
            Self::Blob {
                scheme,
                version,
                payload,
            } => {
                let mut out = Vec::with_capacity(3 + payload.len());
                out.push(*scheme as u8);
                out.extend_from_slice(&version.to_le_bytes());
                out.extend_from_slice(payload);
                out
            }
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CfError> {
        match bytes {
            [] => Ok(Self::Empty),
            [tag, v0, v1, payload @ ..] => {
                let scheme = SchemeTag::from_byte(*tag).ok_or_else(|| {
                    CfError::HelperData(alloc::format!("unknown scheme tag {tag}"))
                })?;
                Ok(Self::Blob {
                    scheme,
                    version: u16::from_le_bytes([*v0, *v1]),
                    payload: payload.to_vec(),
                })
            }
            _ => Err(CfError::HelperData(alloc::format!(
                "{} bytes is too short",
                bytes.len()
            ))),
        }
    }

    fn payload_for(&self, tag: SchemeTag, version: u16) -> Result<&[u8], CfError> {
        match self {
            Self::Empty => Err(CfError::HelperData(
                "reconstruction needs non-empty helper data".into(),
            )),
            Self::Blob {
                scheme,
                version: v,
                payload,
            } => {
                if *scheme != tag {
                    return Err(CfError::HelperData(alloc::format!(
                        "helper data belongs to {scheme}, not {tag}"
                    )));
                }
                if *v != version {
                    return Err(CfError::HelperData(alloc::format!(
                        "unsupported version {v}"
                    )));
                }
                Ok(payload)
            }
        }
    }
}

/// One chemical-function family together with its extraction algorithm.
pub trait Scheme {
    const TAG: SchemeTag;
    const HELPER_VERSION: u16 = 1;

    type Profile: Clone + fmt::Debug + Send + Sync;
    type Challenge: Clone + fmt::Debug + PartialEq;
    type Response: Clone + fmt::Debug;
    /// Evaluation parameters `α_E`, including the noise model.
    type EvalParams: Clone + fmt::Debug + PartialEq;
    /// Extraction parameters `α_X`.
    type ExtractParams: Clone + fmt::Debug + PartialEq;

    fn evaluate(
        profile: &Self::Profile,
        params: &Self::EvalParams,
        x: &Self::Challenge,
        rng: &mut SimRng,
    ) -> Result<Self::Response, CfError>;

    /// The noise-free response.
    fn evaluate_reference(
        profile: &Self::Profile,
        params: &Self::EvalParams,
        x: &Self::Challenge,
    ) -> Result<Self::Response, CfError>;

    /// Setup mode: output plus helper payload.
    fn extract_setup(
        params: &Self::ExtractParams,
        response: &Self::Response,
        rng: &mut SimRng,
    ) -> Result<(Output, Vec<u8>), CfError>;

    /// Reconstruction mode from an existing helper payload.
    fn extract_reconstruct(
        params: &Self::ExtractParams,
        response: &Self::Response,
        payload: &[u8],
    ) -> Result<Output, CfError>;

    fn encode_challenge(x: &Self::Challenge) -> Vec<u8>;
    fn decode_challenge(bytes: &[u8]) -> Result<Self::Challenge, CfError>;
}

/// A chemical function: one profile, evaluation parameters and a noise
/// stream.
pub struct ChemicalFunction<S: Scheme> {
    profile: Arc<S::Profile>,
    params: S::EvalParams,
    seed: u64,
    rng: SimRng,
}

impl<S: Scheme> Clone for ChemicalFunction<S> {
    fn clone(&self) -> Self {
        Self {
            profile: self.profile.clone(),
            params: self.params.clone(),
            seed: self.seed,
            rng: self.rng.clone(),
        }
    }
}

impl<S: Scheme> fmt::Debug for ChemicalFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChemicalFunction")
            .field("scheme", &S::TAG)
            .field("params", &self.params)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl<S: Scheme> ChemicalFunction<S> {
    pub fn new(profile: S::Profile, params: S::EvalParams, seed: u64) -> Self {
        Self::shared(Arc::new(profile), params, seed)
    }

    pub fn shared(profile: Arc<S::Profile>, params: S::EvalParams, seed: u64) -> Self {
        Self {
            profile,
            params,
            seed,
            rng: SimRng::seed_from_u64(seed),
        }
    }

    /// Same profile, independent noise.
    pub fn replica(&self, seed: u64) -> Self {
        Self::shared(self.profile.clone(), self.params.clone(), seed)
    }

    pub fn profile(&self) -> &S::Profile {
        &self.profile
    }

    pub fn profile_arc(&self) -> &Arc<S::Profile> {
        &self.profile
    }

    pub fn params(&self) -> &S::EvalParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn evaluate(&mut self, x: &S::Challenge) -> Result<S::Response, CfError> {
        S::evaluate(&self.profile, &self.params, x, &mut self.rng)
    }

    pub fn evaluate_with(
        &self,
        x: &S::Challenge,
        rng: &mut SimRng,
    ) -> Result<S::Response, CfError> {
        S::evaluate(&self.profile, &self.params, x, rng)
    }

    pub fn evaluate_reference(&self, x: &S::Challenge) -> Result<S::Response, CfError> {
        S::evaluate_reference(&self.profile, &self.params, x)
    }
}

/// How a verifier compares two outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VerifyRule {
    #[default]
    Exact,
    /// Accept when at most `max` bytes differ.
    Distance { max: usize },
}

impl VerifyRule {
    pub fn verify(self, z: &Output, z2: &Output) -> bool {
        match self {
            Self::Exact => z == z2,
            Self::Distance { max } => hamming_distance(&z.0, &z2.0) <= max,
        }
    }
}

/// Which response the setup runs on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Enrollment {
    /// A noisy measurement, like every later evaluation.
    #[default]
    Measured,
    /// The noise-free response (an ideal enrollment lab).
    Reference,
}

/// Stored result of a setup: what a verifier keeps for challenge `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnrolledChallenge<S: Scheme> {
    pub challenge: S::Challenge,
    pub output: Output,
    pub helper: HelperData,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustnessEstimate {
    pub trials: u64,
    pub successes: u64,
    pub point: f64,
    /// Wilson 95% interval.
    pub lo: f64,
    pub hi: f64,
}

impl RobustnessEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let iv = wilson_interval(successes, trials, 0.95);
        Self {
            trials,
            successes,
            point: iv.point,
            lo: iv.lo,
            hi: iv.hi,
        }
    }

    pub fn covers(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// A chemical function system: a chemical function plus extraction.
pub struct Cfs<S: Scheme> {
    cf: ChemicalFunction<S>,
    extract: S::ExtractParams,
    verify: VerifyRule,
    enrollment: Enrollment,
    extract_rng: SimRng,
}

impl<S: Scheme> Clone for Cfs<S> {
    fn clone(&self) -> Self {
        Self {
            cf: self.cf.clone(),
            extract: self.extract.clone(),
            verify: self.verify,
            enrollment: self.enrollment,
            extract_rng: self.extract_rng.clone(),
        }
    }
}

impl<S: Scheme> fmt::Debug for Cfs<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cfs")
            .field("cf", &self.cf)
            .field("extract", &self.extract)
            .field("verify", &self.verify)
            .field("enrollment", &self.enrollment)
            .finish()
    }
}

impl<S: Scheme> Cfs<S> {
    pub fn new(cf: ChemicalFunction<S>, extract: S::ExtractParams) -> Self {
        let extract_rng = SimRng::seed_from_u64(derive_seed(cf.seed, 0x5e7u64));
        Self {
            cf,
            extract,
            verify: VerifyRule::Exact,
            enrollment: Enrollment::Measured,
            extract_rng,
        }
    }

    pub fn with_verify(mut self, rule: VerifyRule) -> Self {
        self.verify = rule;
        self
    }

    pub fn with_enrollment(mut self, mode: Enrollment) -> Self {
        self.enrollment = mode;
        self
    }

    pub fn cf(&self) -> &ChemicalFunction<S> {
        &self.cf
    }

    pub fn cf_mut(&mut self) -> &mut ChemicalFunction<S> {
        &mut self.cf
    }

    pub fn extract_params(&self) -> &S::ExtractParams {
        &self.extract
    }

    pub fn verify_rule(&self) -> VerifyRule {
        self.verify
    }

    /// Same profile and parameters, independent noise.
    pub fn replica(&self, seed: u64) -> Self {
        Self::new(self.cf.replica(seed), self.extract.clone())
            .with_verify(self.verify)
            .with_enrollment(self.enrollment)
    }

    /// Setup mode: evaluate once, extract with empty helper data.
    pub fn setup(&mut self, x: &S::Challenge) -> Result<(Output, HelperData), CfError> {
        let response = match self.enrollment {
            Enrollment::Measured => self.cf.evaluate(x),
            Enrollment::Reference => self.cf.evaluate_reference(x),
        }
        .map_err(setup_error)?;
        self.finish_setup(&response)
    }

    pub fn setup_with(
        &self,
        x: &S::Challenge,
        rng: &mut SimRng,
    ) -> Result<(Output, HelperData), CfError> {
        let response = match self.enrollment {
            Enrollment::Measured => self.cf.evaluate_with(x, rng),
            Enrollment::Reference => self.cf.evaluate_reference(x),
        }
        .map_err(setup_error)?;
        let (z, payload) = S::extract_setup(&self.extract, &response, rng).map_err(setup_error)?;
        Ok((z, Self::blob(payload)))
    }

    fn finish_setup(&mut self, response: &S::Response) -> Result<(Output, HelperData), CfError> {
        let (z, payload) = S::extract_setup(&self.extract, response, &mut self.extract_rng)
            .map_err(setup_error)?;
        Ok((z, Self::blob(payload)))
    }

    fn blob(payload: Vec<u8>) -> HelperData {
        HelperData::Blob {
            scheme: S::TAG,
            version: S::HELPER_VERSION,
            payload,
        }
    }

    /// Setup from a canonical challenge encoding.
    pub fn setup_bytes(&mut self, x: &[u8]) -> Result<(Output, HelperData), CfError> {
        let x = S::decode_challenge(x)?;
        self.setup(&x)
    }

    /// Reconstruction mode. The helper data is only read.
    pub fn reconstruct(&mut self, x: &S::Challenge, h: &HelperData) -> Result<Output, CfError> {
        let payload = h.payload_for(S::TAG, S::HELPER_VERSION)?;
        let response = self.cf.evaluate(x).map_err(reconstruct_error)?;
        S::extract_reconstruct(&self.extract, &response, payload)
    }

    pub fn reconstruct_with(
        &self,
        x: &S::Challenge,
        h: &HelperData,
        rng: &mut SimRng,
    ) -> Result<Output, CfError> {
        let payload = h.payload_for(S::TAG, S::HELPER_VERSION)?;
        let response = self.cf.evaluate_with(x, rng).map_err(reconstruct_error)?;
        S::extract_reconstruct(&self.extract, &response, payload)
    }

    /// Reconstruction returning the (unchanged) helper data alongside `z'`.
    pub fn reconstruct_full(
        &mut self,
        x: &S::Challenge,
        h: &HelperData,
    ) -> Result<(Output, HelperData), CfError> {
        let z = self.reconstruct(x, h)?;
        Ok((z, h.clone()))
    }

    /// Enrollment step of the authentication protocol.
    pub fn enroll(&mut self, x: &S::Challenge) -> Result<EnrolledChallenge<S>, CfError> {
        let (output, helper) = self.setup(x)?;
        Ok(EnrolledChallenge {
            challenge: x.clone(),
            output,
            helper,
        })
    }

    pub fn enroll_with(
        &self,
        x: &S::Challenge,
        rng: &mut SimRng,
    ) -> Result<EnrolledChallenge<S>, CfError> {
        let (output, helper) = self.setup_with(x, rng)?;
        Ok(EnrolledChallenge {
            challenge: x.clone(),
            output,
            helper,
        })
    }

    /// Verification step: measure the candidate on the enrolled challenge,
    /// extract with the stored helper data and compare. Measurement or
    /// decoding failures reject.
    pub fn verify_candidate(
        &self,
        record: &EnrolledChallenge<S>,
        candidate: &mut ChemicalFunction<S>,
    ) -> Result<bool, CfError> {
        self.check_compatible(candidate)?;
        let payload = record.helper.payload_for(S::TAG, S::HELPER_VERSION)?;
        let response = match candidate.evaluate(&record.challenge) {
            Ok(r) => r,
            Err(CfError::EmptyResponse) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(
            match S::extract_reconstruct(&self.extract, &response, payload) {
                Ok(z2) => self.verify.verify(&record.output, &z2),
                Err(CfError::ReconstructFailure(_)) => false,
                Err(e) => return Err(e),
            },
        )
    }

    fn check_compatible(&self, candidate: &ChemicalFunction<S>) -> Result<(), CfError> {
        if candidate.params != self.cf.params {
            return Err(CfError::Protocol(
                "candidate evaluation parameters differ from the reference".into(),
            ));
        }
        Ok(())
    }

    /// Full authentication: setup on the reference, then verify the
    /// candidate against it.
    pub fn authenticate(
        &mut self,
        candidate: &mut ChemicalFunction<S>,
        x: &S::Challenge,
    ) -> Result<bool, CfError> {
        self.check_compatible(candidate)?;
        let record = self.enroll(x)?;
        self.verify_candidate(&record, candidate)
    }

    /// Key generation: the key is the setup output.
    pub fn keygen_enroll(&mut self, x: &S::Challenge) -> Result<(Output, HelperData), CfError> {
        self.setup(x)
    }

    /// Key reconstruction on another system holding a replica profile.
    pub fn keygen_reconstruct(
        &mut self,
        x: &S::Challenge,
        h: &HelperData,
    ) -> Result<Output, CfError> {
        self.reconstruct(x, h)
    }

    /// One setup, then `trials` reconstructions on per-trial noise streams
    /// derived from `seed`; failures count as disagreements.
    pub fn estimate_robustness(
        &mut self,
        x: &S::Challenge,
        trials: u64,
        seed: u64,
    ) -> Result<RobustnessEstimate, CfError> {
        if trials == 0 {
            return Err(CfError::Parameter("trials must be at least 1".into()));
        }
        let (z, h) = self.setup(x)?;
        let mut successes = 0;
        for i in 0..trials {
            let mut rng = stream_rng(seed, i);
            match self.reconstruct_with(x, &h, &mut rng) {
                Ok(z2) if self.verify.verify(&z, &z2) => successes += 1,
                Ok(_) | Err(CfError::ReconstructFailure(_)) | Err(CfError::EmptyResponse) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(RobustnessEstimate::from_counts(successes, trials))
    }
}

fn setup_error(e: CfError) -> CfError {
    match e {
        CfError::EmptyResponse => CfError::SetupFailure("empty response".into()),
        CfError::ReconstructFailure(m) => CfError::SetupFailure(m),
        other => other,
    }
}

fn reconstruct_error(e: CfError) -> CfError {
    match e {
        CfError::EmptyResponse => CfError::ReconstructFailure("empty response".into()),
        other => other,
    }
}
