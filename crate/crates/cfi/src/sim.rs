//! Simulation drivers behind `cfi simulate`.

use std::sync::Arc;

use cfi_core::dye::{dye_robustness, Dye, DyeExtract, DyeParams, DyeProfile};
use cfi_core::exactprob::ml_p_err;
use cfi_core::framework::EnrolledChallenge;
use cfi_core::gse::{gse_gen, gse_respond, GseChallenge, GseGen, SeqModel};
use cfi_core::ordna::{ordna_gen, Ordna, OrdnaConfig, OrdnaEval, OrdnaExtract, OrdnaProfile};
use cfi_core::rng::{derive_seed, stream_rng, SimRng};
use cfi_core::{wilson_interval_z, CfError, Cfs, ChemicalFunction, Enrollment, HelperData, Output};
use rand::SeedableRng;
use serde::Serialize;

use crate::error::Result;
use crate::parallel::map_trials;

/// Wilson interval half-width in standard deviations for coverage claims.
pub const COVERAGE_Z: f64 = 3.0;

#[derive(Clone, Debug, Serialize)]
pub struct DyeSimReport {
    pub flip: f64,
    pub wavelengths: usize,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub point: f64,
    pub lo_3sigma: f64,
    pub hi_3sigma: f64,
    pub closed_form: f64,
    pub covered: bool,
}

/// Robustness of the dye scheme against an ideal enrollment: one mixture,
/// trial `i` reads wavelength `i mod wavelengths` on its own noise stream.
pub fn simulate_dye(
    flip: f64,
    wavelengths: usize,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<DyeSimReport> {
    let params = DyeParams::new(flip)?;
    if wavelengths == 0 || wavelengths > 256 {
        return Err(
            CfError::Parameter(format!("{wavelengths} wavelengths outside 1..=256")).into(),
        );
    }
    let profile = DyeProfile::generate(wavelengths, &mut SimRng::seed_from_u64(seed));
    let mut system = Cfs::new(
        ChemicalFunction::<Dye>::new(profile, params, seed),
        DyeExtract,
    )
    .with_enrollment(Enrollment::Reference);
    let enrolled: Vec<(Output, HelperData)> = (0..wavelengths)
        .map(|x| system.setup(&(x as u8)))
        .collect::<Result<_, _>>()?;
    let ok = map_trials(jobs, trials, |i| {
        let x = (i % wavelengths as u64) as u8;
        let (z, h) = &enrolled[x as usize];
        match system.reconstruct_with(&x, h, &mut stream_rng(seed, i)) {
            Ok(z2) => Ok(&z2 == z),
            Err(CfError::ReconstructFailure(_)) => Ok(false),
            Err(e) => Err(e),
        }
    })?;
    let successes = ok.iter().filter(|&&b| b).count() as u64;
    let iv = wilson_interval_z(successes, trials, COVERAGE_Z);
    let closed_form = dye_robustness(flip);
    Ok(DyeSimReport {
        flip,
        wavelengths,
        seed,
        trials,
        successes,
        point: iv.point,
        lo_3sigma: iv.lo,
        hi_3sigma: iv.hi,
        closed_form,
        covered: iv.contains(closed_form),
    })
}

#[derive(Clone, Debug)]
pub struct OrdnaSimConfig {
    pub pool_size: u64,
    pub seed: u64,
    /// Genuine authentications and replica key generations, each.
    pub trials: u64,
    /// Counterfeit verifications and independent key reconstructions, each.
    pub counterfeits: u64,
    /// Enrollments shared by the counterfeit and independent trials.
    pub enrollments: u64,
    pub eval: OrdnaEval,
    pub extract: OrdnaExtract,
}

impl OrdnaSimConfig {
    pub fn new(pool_size: u64, seed: u64) -> Self {
        Self {
            pool_size,
            seed,
            trials: 1000,
            counterfeits: 10_000,
            enrollments: 50,
            eval: OrdnaEval::default(),
            extract: OrdnaExtract::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdnaSimReport {
    pub pool_size: u64,
    pub seed: u64,
    pub genuine_trials: u64,
    pub genuine_accepts: u64,
    pub acceptance_rate: f64,
    pub counterfeit_trials: u64,
    pub counterfeit_accepts: u64,
    pub keygen_trials: u64,
    pub keygen_agreements: u64,
    pub keygen_agreement_rate: f64,
    pub independent_trials: u64,
    pub independent_agreements: u64,
}

// Stream labels under the run seed.
const GENUINE: u64 = 1;
const ENROLL: u64 = 2;
const COUNTERFEIT: u64 = 3;
const KEYGEN: u64 = 4;
const INDEPENDENT: u64 = 5;

struct OrdnaRun<'a> {
    cfg: &'a OrdnaSimConfig,
    profile: Arc<OrdnaProfile>,
}

impl OrdnaRun<'_> {
    fn system(&self, profile: Arc<OrdnaProfile>, seed: u64) -> Cfs<Ordna> {
        Cfs::new(
            ChemicalFunction::shared(profile, self.cfg.eval, seed),
            self.cfg.extract,
        )
    }

    fn challenge(&self, label: u64, i: u64) -> cfi_core::ordna::Seq {
        self.profile
            .sample_challenge(&mut stream_rng(derive_seed(self.cfg.seed, label), i))
    }

    fn stream(&self, label: u64, i: u64, sub: u64) -> u64 {
        derive_seed(derive_seed(derive_seed(self.cfg.seed, label), i), sub)
    }

    fn genuine(&self, i: u64) -> Result<bool, CfError> {
        let x = self.challenge(GENUINE, i);
        let mut reference = self.system(self.profile.clone(), self.stream(GENUINE, i, 0));
        let record = reference.enroll(&x)?;
        let mut candidate = ChemicalFunction::shared(
            self.profile.clone(),
            self.cfg.eval,
            self.stream(GENUINE, i, 1),
        );
        reference.verify_candidate(&record, &mut candidate)
    }

    fn enroll(&self, i: u64) -> Result<(Cfs<Ordna>, EnrolledChallenge<Ordna>), CfError> {
        let x = self.challenge(ENROLL, i);
        let mut reference = self.system(self.profile.clone(), self.stream(ENROLL, i, 0));
        let record = reference.enroll(&x)?;
        Ok((reference, record))
    }

    fn independent_profile(&self, label: u64, j: u64) -> Result<Arc<OrdnaProfile>, CfError> {
        let config = OrdnaConfig {
            seed: self.stream(label, j, 0),
            ..self.profile.config()
        };
        Ok(Arc::new(ordna_gen(config)?))
    }

    fn counterfeit(
        &self,
        reference: &Cfs<Ordna>,
        record: &EnrolledChallenge<Ordna>,
        j: u64,
    ) -> Result<bool, CfError> {
        let fake = self.independent_profile(COUNTERFEIT, j)?;
        let mut candidate =
            ChemicalFunction::shared(fake, self.cfg.eval, self.stream(COUNTERFEIT, j, 1));
        reference.verify_candidate(record, &mut candidate)
    }

    fn keygen(&self, i: u64) -> Result<bool, CfError> {
        let x = self.challenge(KEYGEN, i);
        let mut a = self.system(self.profile.clone(), self.stream(KEYGEN, i, 0));
        let (z, h) = a.keygen_enroll(&x)?;
        let mut b = a.replica(self.stream(KEYGEN, i, 1));
        agrees(b.keygen_reconstruct(&x, &h), &z)
    }

    fn independent(&self, record: &EnrolledChallenge<Ordna>, j: u64) -> Result<bool, CfError> {
        let other = self.independent_profile(INDEPENDENT, j)?;
        let mut b = self.system(other, self.stream(INDEPENDENT, j, 1));
        agrees(
            b.keygen_reconstruct(&record.challenge, &record.helper),
            &record.output,
        )
    }
}

fn agrees(result: Result<Output, CfError>, z: &Output) -> Result<bool, CfError> {
    match result {
        Ok(z2) => Ok(&z2 == z),
        Err(CfError::ReconstructFailure(_) | CfError::EmptyResponse) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Genuine authentication, counterfeit rejection, replica key agreement and
/// independent-profile key disagreement on one pool.
pub fn simulate_ordna(cfg: &OrdnaSimConfig, jobs: usize) -> Result<OrdnaSimReport> {
    let profile = Arc::new(ordna_gen(OrdnaConfig::new(cfg.seed, cfg.pool_size))?);
    let run = OrdnaRun { cfg, profile };
    let count = |v: Vec<bool>| v.into_iter().filter(|&b| b).count() as u64;

    let genuine_accepts = count(map_trials(jobs, cfg.trials, |i| run.genuine(i))?);
    let keygen_agreements = count(map_trials(jobs, cfg.trials, |i| run.keygen(i))?);
    let records = if cfg.counterfeits > 0 {
        map_trials(jobs, cfg.enrollments.max(1), |i| run.enroll(i))?
    } else {
        Vec::new()
    };
    let pick = |j: u64| &records[(j % records.len() as u64) as usize];
    let counterfeit_accepts = count(map_trials(jobs, cfg.counterfeits, |j| {
        let (reference, record) = pick(j);
        run.counterfeit(reference, record, j)
    })?);
    let independent_agreements = count(map_trials(jobs, cfg.counterfeits, |j| {
        run.independent(&pick(j).1, j)
    })?);

    let rate = |k: u64, n: u64| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    Ok(OrdnaSimReport {
        pool_size: cfg.pool_size,
        seed: cfg.seed,
        genuine_trials: cfg.trials,
        genuine_accepts,
        acceptance_rate: rate(genuine_accepts, cfg.trials),
        counterfeit_trials: cfg.counterfeits,
        counterfeit_accepts,
        keygen_trials: cfg.trials,
        keygen_agreements,
        keygen_agreement_rate: rate(keygen_agreements, cfg.trials),
        independent_trials: cfg.counterfeits,
        independent_agreements,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GseSimReport {
    pub sites: u32,
    pub genome_length: u32,
    pub coverage: u64,
    pub p_seq_err: f64,
    pub p_edit: f64,
    pub seed: u64,
    pub trials: u64,
    pub positions: u64,
    pub errors: u64,
    pub error_rate: f64,
    pub ml_p_err: f64,
    pub lo_3sigma: f64,
    pub hi_3sigma: f64,
    pub consistent: bool,
}

/// Per-position decision error: each trial generates a profile and reads
/// every key-site once.
pub fn simulate_gse(
    gen: GseGen,
    seq: SeqModel,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<GseSimReport> {
    seq.validate()?;
    let expected = ml_p_err(seq.coverage, seq.p_seq_err, gen.p_edit)?;
    let errors: Vec<u64> = map_trials(jobs, trials, |i| {
        let profile = gse_gen(&GseGen {
            seed: derive_seed(seed, i),
            ..gen
        })?;
        let x = GseChallenge::new(profile.coords())?;
        let y = gse_respond(
            &profile,
            &x,
            &seq,
            &mut stream_rng(derive_seed(seed, 0x7265_6164), i),
        )?;
        Ok(x.coords()
            .iter()
            .zip(&y)
            .filter(|(&c, &b)| profile.is_edited(c) != (b == 1))
            .count() as u64)
    })?;
    let errors: u64 = errors.iter().sum();
    let positions = trials * gen.n_sites as u64;
    let iv = wilson_interval_z(errors, positions, COVERAGE_Z);
    Ok(GseSimReport {
        sites: gen.n_sites,
        genome_length: gen.genome_length,
        coverage: seq.coverage,
        p_seq_err: seq.p_seq_err,
        p_edit: gen.p_edit,
        seed,
        trials,
        positions,
        errors,
        error_rate: iv.point,
        ml_p_err: expected,
        lo_3sigma: iv.lo,
        hi_3sigma: iv.hi,
        consistent: iv.contains(expected),
    })
}
