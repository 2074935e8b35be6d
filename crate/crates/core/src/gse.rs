//! Genomic sequence encryption (GSE) as a chemical function.
//!
//! A cell population carries base edits at secret key-sites of a genome:
//! adenine base editors (ABE) at A/T reference bases and cytosine base
//! editors (CBE) at C/G bases. Only a fraction `p_edit` of cells carries an
//! edit. A challenge is an ordered list of coordinates; the response is the
//! bit vector "edited or not" read off `coverage` sequencing reads per
//! coordinate with the maximum-likelihood rule. Extraction is a binary
//! code-offset construction over a shortened BCH code.
//!
//! Genome content is not simulated beyond a lazily derived reference base
//! per coordinate; only key-site status enters the read model.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_distr::{Binomial, Distribution};

use crate::codes::{bch_make, DecodeOutcome, ShortenedBch};
use crate::exactprob::{p_detect, BinomialSpec, GseRates, LogProb, MlDecision, ProbError, TieRule};
use crate::framework::{CfError, Output, Scheme, SchemeTag};
use crate::rng::{hash2, SimRng};

/// Default fraction of edited cells at a key-site.
pub const P_EDIT: f64 = 0.001;
/// Alternative preset: adenine base editing efficiency.
pub const P_EDIT_ABE: f64 = 0.00145;
/// Symmetric per-read sequencing error rate.
pub const P_SEQ_ERR: f64 = 0.036;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditType {
    /// A/T → G/C.
    Abe,
    /// C/G → T/A.
    Cbe,
}

impl EditType {
    /// The editor that acts on a reference base (A=0, C=1, G=2, T=3).
    pub fn for_base(base: u8) -> Self {
        match base & 3 {
            0 | 3 => Self::Abe,
            _ => Self::Cbe,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeySite {
    pub coord: u32,
    pub edit: EditType,
    /// `true` if the site is edited in the population.
    pub bit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GseProfile {
    genome_length: u32,
    sites: Vec<KeySite>,
    p_edit: f64,
    seed: u64,
}

/// Parameters of [`gse_gen`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GseGen {
    pub genome_length: u32,
    pub n_sites: u32,
    pub p_edit: f64,
    pub seed: u64,
}

impl Default for GseGen {
    fn default() -> Self {
        Self {
            genome_length: 1_000_000,
            n_sites: 500,
            p_edit: P_EDIT,
            seed: 0,
        }
    }
}

fn check_p_edit(p: f64) -> Result<(), CfError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(CfError::Parameter(alloc::format!(
            "edit fraction {p} outside (0, 1]"
        )))
    }
}

/// Samples distinct key-sites uniformly and assigns uniform bits.
pub fn gse_gen(params: &GseGen) -> Result<GseProfile, CfError> {
    check_p_edit(params.p_edit)?;
    if params.n_sites > params.genome_length {
        return Err(CfError::Parameter(alloc::format!(
            "{} key-sites do not fit a genome of {} positions",
            params.n_sites,
            params.genome_length
        )));
    }
    let mut rng = SimRng::seed_from_u64(params.seed);
    let mut coords: Vec<u32> = index::sample(
        &mut rng,
        params.genome_length as usize,
        params.n_sites as usize,
    )
    .into_iter()
    .map(|c| c as u32)
    .collect();
    coords.sort_unstable();
    let bits: Vec<bool> = (0..coords.len()).map(|_| rng.random_bool(0.5)).collect();
    GseProfile::from_sites(
        params.genome_length,
        &coords,
        &bits,
        params.p_edit,
        params.seed,
    )
}

impl GseProfile {
    /// A profile with key-sites at `coords` carrying `bits`.
    pub fn from_sites(
        genome_length: u32,
        coords: &[u32],
        bits: &[bool],
        p_edit: f64,
        seed: u64,
    ) -> Result<Self, CfError> {
        check_p_edit(p_edit)?;
        if coords.len() != bits.len() {
            return Err(CfError::Parameter(alloc::format!(
                "{} coordinates but {} bits",
                coords.len(),
                bits.len()
            )));
        }
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CfError::Parameter(
                "key-site coordinates must be strictly increasing".into(),
            ));
        }
        if coords.last().is_some_and(|&c| c >= genome_length) {
            return Err(CfError::Parameter("key-site outside the genome".into()));
        }
        let sites = coords
            .iter()
            .zip(bits)
            .map(|(&coord, &bit)| KeySite {
                coord,
                edit: EditType::for_base(reference_base(seed, coord)),
                bit,
            })
            .collect();
        Ok(Self {
            genome_length,
            sites,
            p_edit,
            seed,
        })
    }

    /// The same key-sites re-edited to carry `bits`.
    pub fn with_bits(&self, bits: &[bool]) -> Result<Self, CfError> {
        let coords: Vec<u32> = self.sites.iter().map(|s| s.coord).collect();
        Self::from_sites(self.genome_length, &coords, bits, self.p_edit, self.seed)
    }

    pub fn genome_length(&self) -> u32 {
        self.genome_length
    }

    pub fn sites(&self) -> &[KeySite] {
        &self.sites
    }

    pub fn coords(&self) -> Vec<u32> {
        self.sites.iter().map(|s| s.coord).collect()
    }

    pub fn p_edit(&self) -> f64 {
        self.p_edit
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn reference_base(&self, coord: u32) -> u8 {
        reference_base(self.seed, coord)
    }

    pub fn site(&self, coord: u32) -> Option<&KeySite> {
        self.sites
            .binary_search_by_key(&coord, |s| s.coord)
            .ok()
            .map(|i| &self.sites[i])
    }

    pub fn is_edited(&self, coord: u32) -> bool {
        self.site(coord).is_some_and(|s| s.bit)
    }

    /// An ordered random subset of `n_chal` key-sites.
    pub fn sample_challenge<R: Rng + ?Sized>(
        &self,
        n_chal: usize,
        rng: &mut R,
    ) -> Result<GseChallenge, CfError> {
        if n_chal > self.sites.len() {
            return Err(CfError::Parameter(alloc::format!(
                "challenge of {n_chal} positions from {} key-sites",
                self.sites.len()
            )));
        }
        let coords = index::sample(rng, self.sites.len(), n_chal)
            .into_iter()
            .map(|i| self.sites[i].coord)
            .collect();
        Ok(GseChallenge { coords })
    }
}

fn reference_base(seed: u64, coord: u32) -> u8 {
    (hash2(seed ^ 0x7265_6667, coord as u64) & 3) as u8
}

/// Sequencing model of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqModel {
    pub p_seq_err: f64,
    /// Reads per queried coordinate.
    pub coverage: u64,
}

impl Default for SeqModel {
    fn default() -> Self {
        Self {
            p_seq_err: P_SEQ_ERR,
            coverage: 2000,
        }
    }
}

impl SeqModel {
    pub fn validate(&self) -> Result<(), CfError> {
        if !(0.0..0.5).contains(&self.p_seq_err) {
            return Err(CfError::Parameter(alloc::format!(
                "sequencing error rate {} outside [0, 0.5)",
                self.p_seq_err
            )));
        }
        if self.coverage == 0 {
            return Err(CfError::Parameter(
                "coverage must be at least one read".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GseChallenge {
    coords: Vec<u32>,
}

impl GseChallenge {
    pub fn new(coords: Vec<u32>) -> Result<Self, CfError> {
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CfError::InvalidChallenge("duplicate coordinate".into()));
        }
        if coords.is_empty() {
            return Err(CfError::InvalidChallenge("empty challenge".into()));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

fn edit_counts<R: Rng + ?Sized>(
    profile: &GseProfile,
    coords: &[u32],
    reads: u64,
    p_seq_err: f64,
    rng: &mut R,
) -> Result<Vec<u64>, CfError> {
    let pd = p_detect(p_seq_err, profile.p_edit);
    let on = Binomial::new(reads, pd).map_err(|e| CfError::Parameter(alloc::format!("{e}")))?;
    let off =
        Binomial::new(reads, p_seq_err).map_err(|e| CfError::Parameter(alloc::format!("{e}")))?;
    Ok(coords
        .iter()
        .map(|&c| {
            if profile.is_edited(c) {
                on.sample(rng)
            } else {
                off.sample(rng)
            }
        })
        .collect())
}

fn check_coords(profile: &GseProfile, x: &GseChallenge) -> Result<(), CfError> {
    match x.coords.iter().find(|&&c| c >= profile.genome_length) {
        Some(c) => Err(CfError::InvalidChallenge(alloc::format!(
            "coordinate {c} outside a genome of {} positions",
            profile.genome_length
        ))),
        None => Ok(()),
    }
}

/// Reads every challenge coordinate `coverage` times and decides each bit
/// with the maximum-likelihood rule.
pub fn gse_respond<R: Rng + ?Sized>(
    profile: &GseProfile,
    x: &GseChallenge,
    seq: &SeqModel,
    rng: &mut R,
) -> Result<Vec<u8>, CfError> {
    seq.validate()?;
    check_coords(profile, x)?;
    let rule = MlDecision::new(
        seq.coverage,
        seq.p_seq_err,
        profile.p_edit,
        TieRule::NotKeySite,
    )?;
    let counts = edit_counts(profile, &x.coords, seq.coverage, seq.p_seq_err, rng)?;
    Ok(counts
        .into_iter()
        .map(|l| rule.is_key_site(l) as u8)
        .collect())
}

/// The full-genome-scan attack: `q` whole-genome reads, then a
/// maximum-likelihood decision with prior 1/2 at every candidate coordinate.
/// With no reads every candidate is decided "not edited".
pub fn adversary_full_scan<R: Rng + ?Sized>(
    profile: &GseProfile,
    q: u64,
    p_seq_err: f64,
    candidates: &[u32],
    rng: &mut R,
) -> Result<Vec<bool>, CfError> {
    if q == 0 {
        return Ok(vec![false; candidates.len()]);
    }
    let rule = MlDecision::new(q, p_seq_err, profile.p_edit, TieRule::NotKeySite)?;
    let counts = edit_counts(profile, candidates, q, p_seq_err, rng)?;
    Ok(counts.into_iter().map(|l| rule.is_key_site(l)).collect())
}

/// Packs 0/1 symbols little-endian within each byte.
pub fn pack_bits(bits: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 8] |= (b & 1) << (i % 8);
    }
    out
}

/// Inverse of [`pack_bits`]; padding bits must be zero.
pub fn unpack_bits(bytes: &[u8], n: usize) -> Result<Vec<u8>, CfError> {
    if bytes.len() != n.div_ceil(8) {
        return Err(CfError::HelperData(alloc::format!(
            "{n} bits need {} bytes, got {}",
            n.div_ceil(8),
            bytes.len()
        )));
    }
    let bits: Vec<u8> = (0..bytes.len() * 8)
        .map(|i| (bytes[i / 8] >> (i % 8)) & 1)
        .collect();
    if bits[n..].iter().any(|&b| b != 0) {
        return Err(CfError::HelperData("nonzero padding bits".into()));
    }
    Ok(bits[..n].to_vec())
}

/// Extraction parameters: a BCH code of length `parent_n` correcting at
/// least `t` errors, shortened to the response length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GseExtract {
    pub parent_n: usize,
    pub t: usize,
}

impl Default for GseExtract {
    fn default() -> Self {
        Self { parent_n: 31, t: 2 }
    }
}

impl GseExtract {
    /// The shortest parent length that fits `len` bits and corrects `t`.
    pub fn for_length(len: usize, t: usize) -> Result<Self, CfError> {
        for m in 3..=10u32 {
            let parent_n = (1usize << m) - 1;
            if parent_n < len {
                continue;
            }
            let params = Self { parent_n, t };
            if params.code(len).is_ok() {
                return Ok(params);
            }
        }
        Err(CfError::Parameter(alloc::format!(
            "no BCH code of length >= {len} corrects {t} errors"
        )))
    }

    pub fn code(&self, len: usize) -> Result<ShortenedBch, CfError> {
        Ok(bch_make(self.parent_n, self.t)?.shorten(len)?)
    }
}

/// Setup: random `z`, helper `h = encode(z) ⊕ y`. Returns the message bits
/// and the helper bits.
pub fn gse_extract_setup<R: Rng + ?Sized>(
    code: &ShortenedBch,
    y: &[u8],
    rng: &mut R,
) -> Result<(Vec<u8>, Vec<u8>), CfError> {
    let spec = code.spec();
    if y.len() != spec.n {
        return Err(CfError::Parameter(alloc::format!(
            "response has {} bits, code length is {}",
            y.len(),
            spec.n
        )));
    }
    let z: Vec<u8> = (0..spec.k).map(|_| rng.random_range(0..2u8)).collect();
    let c = code.encode(&z)?;
    let h = c.iter().zip(y).map(|(a, b)| a ^ (b & 1)).collect();
    Ok((z, h))
}

/// Reconstruction: `decode(h ⊕ y')`.
pub fn gse_extract_reconstruct(
    code: &ShortenedBch,
    y: &[u8],
    h: &[u8],
) -> Result<Vec<u8>, CfError> {
    let n = code.spec().n;
    if y.len() != n || h.len() != n {
        return Err(CfError::Parameter(alloc::format!(
            "code length {n}, response {} bits, helper {} bits",
            y.len(),
            h.len()
        )));
    }
    let w: Vec<u8> = h.iter().zip(y).map(|(a, b)| a ^ (b & 1)).collect();
    match code.decode(&w)? {
        DecodeOutcome::Decoded { message, .. } => Ok(message),
        DecodeOutcome::Failure => Err(CfError::ReconstructFailure("BCH decoding failed".into())),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Gse;

impl Scheme for Gse {
    const TAG: SchemeTag = SchemeTag::Gse;

    type Profile = GseProfile;
    type Challenge = GseChallenge;
    type Response = Vec<u8>;
    type EvalParams = SeqModel;
    type ExtractParams = GseExtract;

    fn evaluate(
        profile: &GseProfile,
        seq: &SeqModel,
        x: &GseChallenge,
        rng: &mut SimRng,
    ) -> Result<Vec<u8>, CfError> {
        gse_respond(profile, x, seq, rng)
    }

    /// The true edit status of every coordinate.
    fn evaluate_reference(
        profile: &GseProfile,
        _: &SeqModel,
        x: &GseChallenge,
    ) -> Result<Vec<u8>, CfError> {
        check_coords(profile, x)?;
        Ok(x.coords
            .iter()
            .map(|&c| profile.is_edited(c) as u8)
            .collect())
    }

    fn extract_setup(
        params: &GseExtract,
        y: &Vec<u8>,
        rng: &mut SimRng,
    ) -> Result<(Output, Vec<u8>), CfError> {
        let code = params.code(y.len())?;
        let (z, h) = gse_extract_setup(&code, y, rng)?;
        Ok((Output(pack_bits(&z)), pack_bits(&h)))
    }

    fn extract_reconstruct(
        params: &GseExtract,
        y: &Vec<u8>,
        payload: &[u8],
    ) -> Result<Output, CfError> {
        let code = params.code(y.len())?;
        let h = unpack_bits(payload, y.len())?;
        Ok(Output(pack_bits(&gse_extract_reconstruct(&code, y, &h)?)))
    }

    fn encode_challenge(x: &GseChallenge) -> Vec<u8> {
        x.coords.iter().flat_map(|c| c.to_le_bytes()).collect()
    }

    fn decode_challenge(bytes: &[u8]) -> Result<GseChallenge, CfError> {
        if bytes.len() % 4 != 0 {
            return Err(CfError::InvalidChallenge(
                "coordinate bytes not a multiple of 4".into(),
            ));
        }
        GseChallenge::new(
            bytes
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect(),
        )
    }
}

/// Probability that the honest reading at one coordinate and the reading of
/// a clone built by a full-scan adversary differ. The adversary takes `q`
/// reads per coordinate, every measurement takes `coverage` reads, and the
/// true bit is uniform.
pub fn clone_mismatch_rate(coverage: u64, q: u64, rates: GseRates) -> Result<f64, ProbError> {
    let GseRates { p_seq_err, p_edit } = rates;
    let honest = MlDecision::new(coverage, p_seq_err, p_edit, TieRule::NotKeySite)?;
    // a: unedited read as 1, d: edited read as 1
    let a = honest.false_alarm();
    let d = 1.0 - honest.miss();
    let (eps0, eps1) = if q == 0 {
        (0.0, 1.0)
    } else {
        let adv = MlDecision::new(q, p_seq_err, p_edit, TieRule::NotKeySite)?;
        (adv.false_alarm(), adv.miss())
    };
    let differ = |x: f64, y: f64| x * (1.0 - y) + (1.0 - x) * y;
    let m0 = eps0 * differ(a, d) + (1.0 - eps0) * differ(a, a);
    let m1 = eps1 * differ(d, a) + (1.0 - eps1) * differ(d, d);
    Ok(0.5 * (m0 + m1))
}

/// Exact success probability of the full-scan clone against measured
/// enrollment: at most `t` of `n_chal` coordinates differ.
pub fn clone_success_exact(
    t: u64,
    n_chal: u64,
    coverage: u64,
    q: u64,
    rates: GseRates,
) -> Result<LogProb, ProbError> {
    let m = clone_mismatch_rate(coverage, q, rates)?;
    BinomialSpec::new(n_chal, m.clamp(0.0, 1.0))?.cdf(t)
}
