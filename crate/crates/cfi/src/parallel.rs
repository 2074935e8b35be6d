//! Parallel trial execution. Each trial draws from its own stream derived
//! from the run seed and its index, and results are collected in index
//! order, so output does not depend on the number of threads.

use cfi_core::games::{
    clone_trial, open_clone_trial, predict_trial, CloneAdversary, GameConfig, GameEstimate,
    GameKind, GameScheme, PredictAdversary, TrialOutcome,
};
use cfi_core::CfError;
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// `f(0), …, f(trials − 1)` on `jobs` threads.
pub fn map_trials<T, F>(jobs: usize, trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T, CfError> + Sync,
{
    if jobs == 0 {
        return Err(CliError::Parameter("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Parameter(format!("thread pool: {e}")))?;
    let out: Result<Vec<T>, CfError> =
        pool.install(|| (0..trials).into_par_iter().map(&f).collect());
    Ok(out?)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(CliError::Parameter("--trials must be at least 1".into()));
    }
    Ok(())
}

/// Parallel version of the clone and open-clone game runners.
pub fn clone_game<S, A, M>(
    kind: GameKind,
    config: &GameConfig<S>,
    make: M,
    q: u64,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<GameEstimate>
where
    S: GameScheme,
    GameConfig<S>: Sync,
    A: CloneAdversary<S>,
    M: Fn(u64) -> A + Sync,
{
    check_trials(trials)?;
    let outcomes: Vec<TrialOutcome> = map_trials(jobs, trials, |i| match kind {
        GameKind::OpenClone => open_clone_trial(config, &mut make(i), q, seed, i),
        _ => clone_trial(config, &mut make(i), q, seed, i),
    })?;
    Ok(GameEstimate::from_outcomes(
        kind,
        S::TAG,
        make(0).name(),
        q,
        &outcomes,
    ))
}

pub fn predict_game<S, A, M>(
    config: &GameConfig<S>,
    make: M,
    q: u64,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<GameEstimate>
where
    S: GameScheme,
    GameConfig<S>: Sync,
    A: PredictAdversary<S>,
    M: Fn(u64) -> A + Sync,
{
    check_trials(trials)?;
    let outcomes = map_trials(jobs, trials, |i| {
        predict_trial(config, &mut make(i), q, seed, i)
    })?;
    Ok(GameEstimate::from_outcomes(
        GameKind::Predict,
        S::TAG,
        make(0).name(),
        q,
        &outcomes,
    ))
}
