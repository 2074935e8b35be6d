//! Security games with pluggable adversaries.
//!
//! Every trial generates a fresh authentic profile, hands the adversary a
//! metered [`GameContext`] and scores the outcome on a challenge the
//! adversary has not queried. Trial `i` of a run with root seed `s` only
//! depends on `(s, i)`, so callers may execute trials in any order or in
//! parallel and merge the [`TrialOutcome`]s.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};

use crate::dye::{Dye, DyeProfile};
use crate::estimate::wilson_interval;
use crate::framework::{
    CfError, Cfs, ChemicalFunction, Enrollment, HelperData, Output, Scheme, SchemeTag, VerifyRule,
};
use crate::gse::{adversary_full_scan, gse_gen, pack_bits, Gse, GseGen};
use crate::ordna::{ordna_gen, Ordna, OrdnaConfig, KEY_LEN};
use crate::rng::{derive_seed, stream_rng, SimRng};

/// A scheme the harness can instantiate from public parameters.
pub trait GameScheme: Scheme {
    /// Public generation parameters.
    type GenParams: Clone + fmt::Debug;

    fn generate(params: &Self::GenParams, rng: &mut SimRng) -> Result<Self::Profile, CfError>;

    /// A challenge from the scheme's challenge distribution.
    fn sample_challenge(
        params: &Self::GenParams,
        profile: &Self::Profile,
        rng: &mut SimRng,
    ) -> Result<Self::Challenge, CfError>;

    /// Size of the challenge space when it is small enough to exhaust.
    fn challenge_count(_params: &Self::GenParams) -> Option<u64> {
        None
    }

    /// A uniformly random element of the output space of `x`.
    fn random_output(params: &Self::ExtractParams, x: &Self::Challenge, rng: &mut SimRng)
        -> Output;

    /// Distance between challenges, where meaningful.
    fn challenge_distance(_a: &Self::Challenge, _b: &Self::Challenge) -> Option<u32> {
        None
    }
}

impl GameScheme for Dye {
    /// Number of wavelengths.
    type GenParams = usize;

    fn generate(wavelengths: &usize, rng: &mut SimRng) -> Result<DyeProfile, CfError> {
        if *wavelengths == 0 || *wavelengths > 256 {
            return Err(CfError::Parameter(alloc::format!(
                "{wavelengths} wavelengths outside 1..=256"
            )));
        }
        Ok(DyeProfile::generate(*wavelengths, rng))
    }

    fn sample_challenge(
        wavelengths: &usize,
        _: &DyeProfile,
        rng: &mut SimRng,
    ) -> Result<u8, CfError> {
        Ok(rng.random_range(0..*wavelengths) as u8)
    }

    fn challenge_count(wavelengths: &usize) -> Option<u64> {
        Some(*wavelengths as u64)
    }

    fn random_output(_: &crate::dye::DyeExtract, _: &u8, rng: &mut SimRng) -> Output {
        Output(alloc::vec![rng.random_range(0..16u8)])
    }

    /// Wavelengths are either equal or unrelated.
    fn challenge_distance(a: &u8, b: &u8) -> Option<u32> {
        Some((a != b) as u32)
    }
}

impl GameScheme for Ordna {
    type GenParams = OrdnaConfig;

    /// A pool of the configured size and layout under a fresh seed.
    fn generate(
        config: &OrdnaConfig,
        rng: &mut SimRng,
    ) -> Result<crate::ordna::OrdnaProfile, CfError> {
        ordna_gen(OrdnaConfig {
            seed: rng.random(),
            ..*config
        })
    }

    fn sample_challenge(
        _: &OrdnaConfig,
        profile: &crate::ordna::OrdnaProfile,
        rng: &mut SimRng,
    ) -> Result<crate::ordna::Seq, CfError> {
        Ok(profile.sample_challenge(rng))
    }

    fn random_output(
        _: &crate::ordna::OrdnaExtract,
        _: &crate::ordna::Seq,
        rng: &mut SimRng,
    ) -> Output {
        let mut z = [0u8; KEY_LEN];
        rng.fill(&mut z[..]);
        Output(z.to_vec())
    }

    fn challenge_distance(a: &crate::ordna::Seq, b: &crate::ordna::Seq) -> Option<u32> {
        (a.len() == b.len()).then(|| a.hamming(b))
    }
}

/// GSE generation parameters plus the challenge length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GseGameParams {
    pub gen: GseGen,
    pub n_chal: usize,
}

impl GameScheme for Gse {
    type GenParams = GseGameParams;

    fn generate(
        params: &GseGameParams,
        rng: &mut SimRng,
    ) -> Result<crate::gse::GseProfile, CfError> {
        gse_gen(&GseGen {
            seed: rng.random(),
            ..params.gen
        })
    }

    fn sample_challenge(
        params: &GseGameParams,
        profile: &crate::gse::GseProfile,
        rng: &mut SimRng,
    ) -> Result<crate::gse::GseChallenge, CfError> {
        profile.sample_challenge(params.n_chal, rng)
    }

    fn random_output(
        params: &crate::gse::GseExtract,
        x: &crate::gse::GseChallenge,
        rng: &mut SimRng,
    ) -> Output {
        let k = params.code(x.len()).map_or(0, |c| c.spec().k);
        let bits: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
        Output(pack_bits(&bits))
    }
}

/// Everything about a system except its profile.
pub struct GameConfig<S: GameScheme> {
    pub gen: S::GenParams,
    pub eval: S::EvalParams,
    pub extract: S::ExtractParams,
    pub enrollment: Enrollment,
    pub verify: VerifyRule,
}

impl<S: GameScheme> Clone for GameConfig<S> {
    fn clone(&self) -> Self {
        Self {
            gen: self.gen.clone(),
            eval: self.eval.clone(),
            extract: self.extract.clone(),
            enrollment: self.enrollment,
            verify: self.verify,
        }
    }
}

impl<S: GameScheme> fmt::Debug for GameConfig<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameConfig")
            .field("gen", &self.gen)
            .field("eval", &self.eval)
            .field("extract", &self.extract)
            .field("enrollment", &self.enrollment)
            .field("verify", &self.verify)
            .finish()
    }
}

impl<S: GameScheme> GameConfig<S> {
    pub fn new(gen: S::GenParams, eval: S::EvalParams, extract: S::ExtractParams) -> Self {
        Self {
            gen,
            eval,
            extract,
            enrollment: Enrollment::Measured,
            verify: VerifyRule::Exact,
        }
    }

    pub fn with_enrollment(mut self, enrollment: Enrollment) -> Self {
        self.enrollment = enrollment;
        self
    }

    /// A system around `profile` using these parameters verbatim.
    pub fn system(&self, profile: Arc<S::Profile>, seed: u64) -> Cfs<S> {
        let cf = ChemicalFunction::shared(profile, self.eval.clone(), seed);
        Cfs::new(cf, self.extract.clone())
            .with_enrollment(self.enrollment)
            .with_verify(self.verify)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GameError {
    /// The adversary exceeded its query or operation budget.
    Budget {
        limit: u64,
        requested: u64,
    },
    /// A capability this game does not grant.
    Forbidden(&'static str),
    Cf(CfError),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Budget { limit, requested } => {
                write!(f, "budget of {limit} exceeded ({requested} requested)")
            }
            Self::Forbidden(what) => write!(f, "not allowed in this game: {what}"),
            Self::Cf(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GameError {}

impl From<CfError> for GameError {
    fn from(e: CfError) -> Self {
        Self::Cf(e)
    }
}

/// What an oracle query returns: the measurement and the setup output.
#[derive(Clone, Debug)]
pub struct QueryAnswer<S: Scheme> {
    pub response: S::Response,
    pub output: Output,
    pub helper: HelperData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    Clone,
    OpenClone,
    Predict,
}

impl GameKind {
    pub fn id(self) -> &'static str {
        match self {
            Self::Clone => "clone",
            Self::OpenClone => "open-clone",
            Self::Predict => "predict",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// The adversary's view of one trial.
pub struct GameContext<'a, S: GameScheme> {
    config: &'a GameConfig<S>,
    authentic: &'a Cfs<S>,
    kind: GameKind,
    oracle_rng: SimRng,
    query_limit: u64,
    ops_limit: u64,
    ops_used: u64,
    queries: Vec<S::Challenge>,
    revealed: bool,
    leaks: u64,
}

impl<'a, S: GameScheme> GameContext<'a, S> {
    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn config(&self) -> &GameConfig<S> {
        self.config
    }

    pub fn query_budget(&self) -> u64 {
        self.query_limit
    }

    pub fn ops_budget(&self) -> u64 {
        self.ops_limit
    }

    pub fn ops_used(&self) -> u64 {
        self.ops_used
    }

    pub fn queries(&self) -> &[S::Challenge] {
        &self.queries
    }

    /// A challenge from the public challenge distribution.
    pub fn sample_challenge(&mut self, rng: &mut SimRng) -> Result<S::Challenge, GameError> {
        Ok(S::sample_challenge(
            &self.config.gen,
            self.authentic.cf().profile(),
            rng,
        )?)
    }

    /// Evaluates the authentic instance at `x` and runs setup on the result.
    /// In the open game each query also costs one operation.
    pub fn query(&mut self, x: &S::Challenge) -> Result<QueryAnswer<S>, GameError> {
        self.spend_query(x)?;
        let response = self.authentic.cf().evaluate_with(x, &mut self.oracle_rng)?;
        let (output, payload) =
            S::extract_setup(&self.config.extract, &response, &mut self.oracle_rng)?;
        let helper = HelperData::Blob {
            scheme: S::TAG,
            version: S::HELPER_VERSION,
            payload,
        };
        Ok(QueryAnswer {
            response,
            output,
            helper,
        })
    }

    /// An oracle query that skips setup and returns only the measurement.
    /// Costs the same as [`Self::query`].
    pub fn query_response(&mut self, x: &S::Challenge) -> Result<S::Response, GameError> {
        self.spend_query(x)?;
        Ok(self.authentic.cf().evaluate_with(x, &mut self.oracle_rng)?)
    }

    fn spend_query(&mut self, x: &S::Challenge) -> Result<(), GameError> {
        let requested = self.queries.len() as u64 + 1;
        if requested > self.query_limit {
            return Err(GameError::Budget {
                limit: self.query_limit,
                requested,
            });
        }
        if self.kind == GameKind::OpenClone {
            self.charge(1)?;
        }
        self.queries.push(x.clone());
        Ok(())
    }

    fn charge(&mut self, units: u64) -> Result<(), GameError> {
        let requested = self.ops_used.saturating_add(units);
        if requested > self.ops_limit {
            return Err(GameError::Budget {
                limit: self.ops_limit,
                requested,
            });
        }
        self.ops_used = requested;
        Ok(())
    }

    /// Direct physical access to the authentic instance in the open game,
    /// after paying `units` operations.
    pub fn open_access(&mut self, units: u64) -> Result<&S::Profile, GameError> {
        if self.kind != GameKind::OpenClone {
            return Err(GameError::Forbidden("physical access to the instance"));
        }
        self.charge(units)?;
        Ok(self.authentic.cf().profile())
    }

    /// The true profile, bypassing all budgets. Trials using it are
    /// flagged.
    pub fn reveal_profile(&mut self) -> S::Profile {
        self.revealed = true;
        self.authentic.cf().profile().clone()
    }

    /// The idealized leak of the neighborhood argument: the authentic
    /// output at `x` under helper data `h`. Counted per trial.
    pub fn leak_output(&mut self, x: &S::Challenge, h: &HelperData) -> Result<Output, GameError> {
        self.leaks += 1;
        Ok(self
            .authentic
            .reconstruct_with(x, h, &mut self.oracle_rng)?)
    }
}

/// A cloning adversary: produces a candidate profile.
pub trait CloneAdversary<S: GameScheme> {
    fn name(&self) -> String;
    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        rng: &mut SimRng,
    ) -> Result<S::Profile, GameError>;
}

/// A prediction adversary: observes, then guesses the output at a fresh
/// challenge given its helper data.
pub trait PredictAdversary<S: GameScheme> {
    fn name(&self) -> String;
    fn observe(&mut self, ctx: &mut GameContext<'_, S>, rng: &mut SimRng) -> Result<(), GameError>;
    fn predict(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        x: &S::Challenge,
        h: &HelperData,
        rng: &mut SimRng,
    ) -> Result<Output, GameError>;
}

/// Result of one trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    pub success: bool,
    /// The adversary broke the rules or ran out of budget.
    pub disqualified: bool,
    /// Every challenge had been queried, so the scored one is not fresh.
    pub freshness_waived: bool,
    /// The adversary saw the true profile.
    pub privileged: bool,
    pub leaks: u64,
}

/// Aggregate of a game run.
#[derive(Clone, Debug, PartialEq)]
pub struct GameEstimate {
    pub game: GameKind,
    pub scheme: SchemeTag,
    pub adversary: String,
    pub q: u64,
    pub trials: u64,
    pub successes: u64,
    pub disqualified: u64,
    pub freshness_waived: u64,
    pub privileged: u64,
    pub point: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub analytic_log10_bound: Option<f64>,
}

impl GameEstimate {
    pub fn from_outcomes(
        game: GameKind,
        scheme: SchemeTag,
        adversary: String,
        q: u64,
        outcomes: &[TrialOutcome],
    ) -> Self {
        let trials = outcomes.len() as u64;
        let count = |f: fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
        let successes = count(|o| o.success);
        let ci = wilson_interval(successes, trials, 0.95);
        Self {
            game,
            scheme,
            adversary,
            q,
            trials,
            successes,
            disqualified: count(|o| o.disqualified),
            freshness_waived: count(|o| o.freshness_waived),
            privileged: count(|o| o.privileged),
            point: ci.point,
            wilson_lo: ci.lo,
            wilson_hi: ci.hi,
            analytic_log10_bound: None,
        }
    }

    pub fn with_bound(mut self, log10: f64) -> Self {
        self.analytic_log10_bound = Some(log10);
        self
    }
}

const MAX_FRESH_ATTEMPTS: u32 = 10_000;

struct Trial<S: GameScheme> {
    authentic: Cfs<S>,
    adv_rng: SimRng,
    judge_rng: SimRng,
    oracle_seed: u64,
}

fn start<S: GameScheme>(
    config: &GameConfig<S>,
    seed: u64,
    trial: u64,
) -> Result<Trial<S>, CfError> {
    let root = derive_seed(seed, trial);
    let profile = S::generate(&config.gen, &mut stream_rng(root, 0))?;
    Ok(Trial {
        authentic: config.system(Arc::new(profile), derive_seed(root, 1)),
        adv_rng: stream_rng(root, 2),
        judge_rng: stream_rng(root, 3),
        oracle_seed: derive_seed(root, 4),
    })
}

fn context<'a, S: GameScheme>(
    config: &'a GameConfig<S>,
    t: &'a Trial<S>,
    kind: GameKind,
    q: u64,
    ops: u64,
) -> GameContext<'a, S> {
    GameContext {
        config,
        authentic: &t.authentic,
        kind,
        oracle_rng: SimRng::seed_from_u64(t.oracle_seed),
        query_limit: q,
        ops_limit: ops,
        ops_used: 0,
        queries: Vec::new(),
        revealed: false,
        leaks: 0,
    }
}

/// A challenge outside the queried set, or any challenge if the space is
/// exhausted (flagged).
fn fresh_challenge<S: GameScheme>(
    config: &GameConfig<S>,
    profile: &S::Profile,
    queried: &[S::Challenge],
    rng: &mut SimRng,
) -> Result<(S::Challenge, bool), CfError> {
    if let Some(total) = S::challenge_count(&config.gen) {
        let mut distinct: Vec<&S::Challenge> = Vec::new();
        for x in queried {
            if !distinct.contains(&x) {
                distinct.push(x);
            }
        }
        if distinct.len() as u64 >= total {
            return Ok((S::sample_challenge(&config.gen, profile, rng)?, true));
        }
    }
    for _ in 0..MAX_FRESH_ATTEMPTS {
        let x = S::sample_challenge(&config.gen, profile, rng)?;
        if !queried.contains(&x) {
            return Ok((x, false));
        }
    }
    Err(CfError::Parameter("no fresh challenge found".into()))
}

fn outcome_of(
    result: Result<bool, GameError>,
    privileged: bool,
    leaks: u64,
    waived: bool,
) -> Result<TrialOutcome, CfError> {
    match result {
        Ok(success) => Ok(TrialOutcome {
            success,
            disqualified: false,
            freshness_waived: waived,
            privileged,
            leaks,
        }),
        Err(GameError::Budget { .. } | GameError::Forbidden(_)) => Ok(TrialOutcome {
            success: false,
            disqualified: true,
            freshness_waived: waived,
            privileged,
            leaks,
        }),
        Err(GameError::Cf(e)) => Err(e),
    }
}

fn clone_like_trial<S: GameScheme, A: CloneAdversary<S>>(
    kind: GameKind,
    config: &GameConfig<S>,
    adversary: &mut A,
    q: u64,
    ops: u64,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome, CfError> {
    let mut t = start(config, seed, trial)?;
    let mut adv_rng = t.adv_rng.clone();
    let (candidate, queried, revealed, leaks) = {
        let mut ctx = context(config, &t, kind, q, ops);
        let candidate = adversary.synthesize(&mut ctx, &mut adv_rng);
        (candidate, ctx.queries, ctx.revealed, ctx.leaks)
    };
    let candidate = match candidate {
        Ok(p) => p,
        Err(e) => return outcome_of(Err(e), revealed, leaks, false),
    };
    let (x, waived) = fresh_challenge(
        config,
        t.authentic.cf().profile(),
        &queried,
        &mut t.judge_rng,
    )?;
    assert!(
        waived || !queried.contains(&x),
        "scored challenge was queried"
    );
    let (z, h) = match t.authentic.setup_with(&x, &mut t.judge_rng) {
        Ok(v) => v,
        // the authentic instance itself cannot be set up: nothing to clone
        Err(CfError::SetupFailure(_)) => return outcome_of(Ok(false), revealed, leaks, waived),
        Err(e) => return Err(e),
    };
    let counterfeit = config.system(Arc::new(candidate), derive_seed(seed ^ 0x636c_6f6e, trial));
    let success = match counterfeit.reconstruct_with(&x, &h, &mut t.judge_rng) {
        Ok(z2) => config.verify.verify(&z, &z2),
        Err(CfError::ReconstructFailure(_) | CfError::EmptyResponse) => false,
        Err(e) => return Err(e),
    };
    outcome_of(Ok(success), revealed, leaks, waived)
}

/// One trial of the chosen-challenge cloning game.
pub fn clone_trial<S: GameScheme, A: CloneAdversary<S>>(
    config: &GameConfig<S>,
    adversary: &mut A,
    q: u64,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome, CfError> {
    clone_like_trial(GameKind::Clone, config, adversary, q, 0, seed, trial)
}

/// One trial of the open cloning game with `q_ops` operations.
pub fn open_clone_trial<S: GameScheme, A: CloneAdversary<S>>(
    config: &GameConfig<S>,
    adversary: &mut A,
    q_ops: u64,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome, CfError> {
    clone_like_trial(
        GameKind::OpenClone,
        config,
        adversary,
        q_ops,
        q_ops,
        seed,
        trial,
    )
}

/// One trial of the prediction game.
pub fn predict_trial<S: GameScheme, A: PredictAdversary<S>>(
    config: &GameConfig<S>,
    adversary: &mut A,
    q: u64,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome, CfError> {
    let mut t = start(config, seed, trial)?;
    let mut adv_rng = t.adv_rng.clone();
    let oracle_seed = t.oracle_seed;
    let mut ctx = context(config, &t, GameKind::Predict, q, 0);
    if let Err(e) = adversary.observe(&mut ctx, &mut adv_rng) {
        let (revealed, leaks) = (ctx.revealed, ctx.leaks);
        return outcome_of(Err(e), revealed, leaks, false);
    }
    let queried = ctx.queries.clone();
    drop(ctx);
    let (x, waived) = fresh_challenge(
        config,
        t.authentic.cf().profile(),
        &queried,
        &mut t.judge_rng,
    )?;
    let (z, h) = match t.authentic.setup_with(&x, &mut t.judge_rng) {
        Ok(v) => v,
        Err(CfError::SetupFailure(_)) => return outcome_of(Ok(false), false, 0, waived),
        Err(e) => return Err(e),
    };
    let mut ctx = context(config, &t, GameKind::Predict, q, 0);
    ctx.queries = queried;
    ctx.oracle_rng = stream_rng(oracle_seed, 1);
    let guess = adversary.predict(&mut ctx, &x, &h, &mut adv_rng);
    let (revealed, leaks) = (ctx.revealed, ctx.leaks);
    outcome_of(
        guess.map(|g| config.verify.verify(&z, &g)),
        revealed,
        leaks,
        waived,
    )
}

fn run<F>(trials: u64, mut one: F) -> Result<Vec<TrialOutcome>, CfError>
where
    F: FnMut(u64) -> Result<TrialOutcome, CfError>,
{
    if trials == 0 {
        return Err(CfError::Parameter("trials must be at least 1".into()));
    }
    (0..trials).map(&mut one).collect()
}

/// Runs `trials` cloning-game trials; `make` builds a fresh adversary per
/// trial.
pub fn run_clone_game<S: GameScheme, A: CloneAdversary<S>>(
    config: &GameConfig<S>,
    make: impl Fn(u64) -> A,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<GameEstimate, CfError> {
    let name = make(0).name();
    let outcomes = run(trials, |i| clone_trial(config, &mut make(i), q, seed, i))?;
    Ok(GameEstimate::from_outcomes(
        GameKind::Clone,
        S::TAG,
        name,
        q,
        &outcomes,
    ))
}

pub fn run_open_clone_game<S: GameScheme, A: CloneAdversary<S>>(
    config: &GameConfig<S>,
    make: impl Fn(u64) -> A,
    q_ops: u64,
    trials: u64,
    seed: u64,
) -> Result<GameEstimate, CfError> {
    let name = make(0).name();
    let outcomes = run(trials, |i| {
        open_clone_trial(config, &mut make(i), q_ops, seed, i)
    })?;
    Ok(GameEstimate::from_outcomes(
        GameKind::OpenClone,
        S::TAG,
        name,
        q_ops,
        &outcomes,
    ))
}

pub fn run_predict_game<S: GameScheme, A: PredictAdversary<S>>(
    config: &GameConfig<S>,
    make: impl Fn(u64) -> A,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<GameEstimate, CfError> {
    let name = make(0).name();
    let outcomes = run(trials, |i| predict_trial(config, &mut make(i), q, seed, i))?;
    Ok(GameEstimate::from_outcomes(
        GameKind::Predict,
        S::TAG,
        name,
        q,
        &outcomes,
    ))
}

// Built-in adversaries.

/// Handed the true profile; flagged as privileged.
#[derive(Clone, Copy, Debug, Default)]
pub struct PerfectCopy;

impl<S: GameScheme> CloneAdversary<S> for PerfectCopy {
    fn name(&self) -> String {
        "perfect-copy".into()
    }

    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        _: &mut SimRng,
    ) -> Result<S::Profile, GameError> {
        Ok(ctx.reveal_profile())
    }
}

/// Synthesizes an independent profile from the public parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomSynthesis;

impl<S: GameScheme> CloneAdversary<S> for RandomSynthesis {
    fn name(&self) -> String {
        "random-synthesis".into()
    }

    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        rng: &mut SimRng,
    ) -> Result<S::Profile, GameError> {
        Ok(S::generate(&ctx.config().gen, rng)?)
    }
}

/// Queries every wavelength of a dye mixture and replays the table.
#[derive(Clone, Copy, Debug, Default)]
pub struct FullTable;

impl FullTable {
    fn table(ctx: &mut GameContext<'_, Dye>) -> Result<Vec<QueryAnswer<Dye>>, GameError> {
        let n = ctx.config().gen;
        (0..n).map(|x| ctx.query(&(x as u8))).collect()
    }
}

impl CloneAdversary<Dye> for FullTable {
    fn name(&self) -> String {
        "full-table".into()
    }

    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, Dye>,
        _: &mut SimRng,
    ) -> Result<DyeProfile, GameError> {
        let table = Self::table(ctx)?;
        Ok(DyeProfile {
            patterns: table.into_iter().map(|a| a.response).collect(),
        })
    }
}

/// Full-table replay for prediction: keeps the observed outputs.
#[derive(Clone, Debug, Default)]
pub struct FullTablePredict {
    outputs: Vec<Output>,
}

impl PredictAdversary<Dye> for FullTablePredict {
    fn name(&self) -> String {
        "full-table".into()
    }

    fn observe(&mut self, ctx: &mut GameContext<'_, Dye>, _: &mut SimRng) -> Result<(), GameError> {
        self.outputs = FullTable::table(ctx)?
            .into_iter()
            .map(|a| a.output)
            .collect();
        Ok(())
    }

    fn predict(
        &mut self,
        _: &mut GameContext<'_, Dye>,
        x: &u8,
        _: &HelperData,
        _: &mut SimRng,
    ) -> Result<Output, GameError> {
        self.outputs
            .get(*x as usize)
            .cloned()
            .ok_or(GameError::Forbidden("unqueried wavelength"))
    }
}

/// The GSE full-genome-scan clone: `q_ops` whole-genome reads (one
/// operation each), a maximum-likelihood call at every designated site and
/// a copy edited at the sites called "edited".
#[derive(Clone, Copy, Debug, Default)]
pub struct FullScan;

impl CloneAdversary<Gse> for FullScan {
    fn name(&self) -> String {
        "full-scan".into()
    }

    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, Gse>,
        rng: &mut SimRng,
    ) -> Result<crate::gse::GseProfile, GameError> {
        let q = ctx.ops_budget();
        let p_seq_err = ctx.config().eval.p_seq_err;
        let profile = if q == 0 && ctx.kind() == GameKind::OpenClone {
            // no reads: only the public site list is used
            let p = ctx.authentic.cf().profile();
            let coords = p.coords();
            let guess = alloc::vec![false; coords.len()];
            return Ok(p.with_bits(&guess)?);
        } else {
            ctx.open_access(q)?
        };
        let coords = profile.coords();
        let guess = adversary_full_scan(profile, q, p_seq_err, &coords, rng)?;
        Ok(profile.with_bits(&guess)?)
    }
}

/// Guesses a uniformly random output.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomGuess;

impl<S: GameScheme> PredictAdversary<S> for RandomGuess {
    fn name(&self) -> String {
        "random-guess".into()
    }

    fn observe(&mut self, _: &mut GameContext<'_, S>, _: &mut SimRng) -> Result<(), GameError> {
        Ok(())
    }

    fn predict(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        x: &S::Challenge,
        _: &HelperData,
        rng: &mut SimRng,
    ) -> Result<Output, GameError> {
        Ok(S::random_output(&ctx.config().extract, x, rng))
    }
}

/// Queries `q` challenges. At the scored challenge it learns the output
/// exactly if some query lies within distance `kappa`, and guesses
/// otherwise. This is the idealization "a neighborhood leaks everything,
/// the rest leaks nothing", not a real attack.
#[derive(Clone, Copy, Debug)]
pub struct NeighborhoodReplay {
    pub kappa: u32,
}

impl<S: GameScheme> PredictAdversary<S> for NeighborhoodReplay {
    fn name(&self) -> String {
        alloc::format!("neighborhood-replay(kappa={})", self.kappa)
    }

    fn observe(&mut self, ctx: &mut GameContext<'_, S>, rng: &mut SimRng) -> Result<(), GameError> {
        for _ in 0..ctx.query_budget() {
            let x = ctx.sample_challenge(rng)?;
            match ctx.query_response(&x) {
                Ok(_) | Err(GameError::Cf(CfError::EmptyResponse)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    fn predict(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        x: &S::Challenge,
        h: &HelperData,
        rng: &mut SimRng,
    ) -> Result<Output, GameError> {
        let near = ctx
            .queries()
            .iter()
            .any(|y| S::challenge_distance(x, y).is_some_and(|d| d <= self.kappa));
        if near {
            match ctx.leak_output(x, h) {
                Ok(z) => return Ok(z),
                Err(GameError::Cf(CfError::ReconstructFailure(_) | CfError::EmptyResponse)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(S::random_output(&ctx.config().extract, x, rng))
    }
}

/// Boxed adversaries for callers that pick a strategy at run time.
pub type DynClone<S> = Box<dyn CloneAdversary<S>>;
pub type DynPredict<S> = Box<dyn PredictAdversary<S>>;

impl<S: GameScheme> CloneAdversary<S> for DynClone<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn synthesize(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        rng: &mut SimRng,
    ) -> Result<S::Profile, GameError> {
        (**self).synthesize(ctx, rng)
    }
}

impl<S: GameScheme> PredictAdversary<S> for DynPredict<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn observe(&mut self, ctx: &mut GameContext<'_, S>, rng: &mut SimRng) -> Result<(), GameError> {
        (**self).observe(ctx, rng)
    }

    fn predict(
        &mut self,
        ctx: &mut GameContext<'_, S>,
        x: &S::Challenge,
        h: &HelperData,
        rng: &mut SimRng,
    ) -> Result<Output, GameError> {
        (**self).predict(ctx, x, h, rng)
    }
}
