//! `cfi` subcommands. Every run writes its artifacts plus a manifest whose
//! argument list reproduces them; `cfi replay` checks that it does.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use cfi_core::bounds::{
    asymptotic_surrogate, decision_boundary_curve, guess_bound, ordna_robustness_value,
    schur_check, table_gse_robustness, table_unpredictability, unclonability_chain, MismatchReport,
    TableArtifact, TailMode,
};
use cfi_core::dye::{Dye, DyeExtract, DyeParams};
use cfi_core::exactprob::{clone_success_gse, GseRates};
use cfi_core::games::{
    DynClone, DynPredict, FullScan, FullTable, FullTablePredict, GameConfig, GameEstimate,
    GameKind, GameScheme, GseGameParams, NeighborhoodReplay, PerfectCopy, RandomGuess,
    RandomSynthesis,
};
use cfi_core::gse::{clone_success_exact, Gse, GseExtract, GseGen, SeqModel};
use cfi_core::ordna::{Ordna, OrdnaConfig, OrdnaEval, OrdnaExtract};
use cfi_core::{Enrollment, LogProb};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{exit, CliError, Result};
use crate::parallel::{clone_game, default_jobs, predict_game};
use crate::report::{
    provenance_of, to_json, ArtifactRecord, GameReport, Manifest, MismatchJson, ProbJson,
};
use crate::sim::{simulate_dye, simulate_gse, simulate_ordna, OrdnaSimConfig};

#[derive(Debug, Parser)]
#[command(
    name = "cfi",
    version,
    about = "Chemical function analytics, simulations and security games"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Run seed; drawn at random and recorded when absent.
    #[arg(long, global = true, env = "CFI_SEED")]
    pub seed: Option<u64>,
    /// Monte Carlo trials (subcommand default when absent).
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also print artifacts on stdout.
    #[arg(long, global = true)]
    pub stdout: bool,
    /// JSON object of flag values; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact analytic tables and checks.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Monte Carlo robustness and protocol statistics.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Security games against a named adversary.
    #[command(subcommand)]
    Game(GameCmd),
    /// Rerun a manifest and compare artifact digests.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// σ(13, κ, q) for κ ∈ {1,2,3} and q = 10⁰…10⁵ against the printed grid.
    Unpredictability,
    /// Overlap bound p_e and the clone tail τ.
    Unclonability {
        #[arg(long, default_value_t = 200)]
        support: u64,
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value_t = 255)]
        n: u64,
        #[arg(long, default_value_t = 111)]
        t: u64,
    },
    /// Exact RS(255, 32) failure probability at symbol error 0.17.
    OrdnaRobustness,
    /// GSE decoding success grid against the printed grid.
    GseRobustness {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Maximum-likelihood decision threshold as a function of p_e.
    DecisionBoundary {
        #[arg(long, default_value_t = 0.001)]
        pmin: f64,
        #[arg(long, default_value_t = 0.05)]
        pmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0.001)]
        p_edit: f64,
    },
    /// Exact Schur-concavity check of the collision function.
    Schur {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        s: u32,
        /// Grid step is 1/grid.
        #[arg(long, default_value_t = 10)]
        grid: u64,
    },
    /// σ(2n, 3, n^d)·n^d over a range of n.
    Surrogate {
        #[arg(long, default_value_t = 64)]
        nmin: u32,
        #[arg(long, default_value_t = 4096)]
        nmax: u32,
        #[arg(long, default_value_t = 8)]
        dmax: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Cdf,
    Sf,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    /// Robustness of the dye scheme.
    Dye {
        /// Per-bit flip probability.
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        wavelengths: usize,
    },
    /// Authentication and key generation on one pool.
    Ordna {
        #[arg(long, default_value_t = 100_000)]
        pool: u64,
        /// Counterfeit and independent-profile trials, each.
        #[arg(long, default_value_t = 10_000)]
        counterfeits: u64,
        /// Enrollments the counterfeits are checked against.
        #[arg(long, default_value_t = 50)]
        enrollments: u64,
        #[arg(long, default_value_t = 30)]
        runs: usize,
    },
    /// Per-position decision error at the key-sites.
    Gse {
        #[arg(long, default_value_t = 100)]
        sites: u32,
        #[arg(long, default_value_t = 100_000)]
        genome: u32,
        #[arg(long, default_value_t = 1000)]
        coverage: u64,
        #[arg(long, default_value_t = 0.036)]
        p_seq_err: f64,
        #[arg(long, default_value_t = 0.001)]
        p_edit: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// perfect-copy, random-synthesis, full-table, full-scan, random-guess,
    /// neighborhood-replay.
    #[arg(long)]
    pub adversary: String,
    /// Query budget [default: dye 8, gse 1000, ordna 100].
    #[arg(long, visible_alias = "q-ops")]
    pub q: Option<u64>,
    /// Dye flip probability.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 1)]
    pub kappa: u32,
    #[arg(long, default_value_t = 8)]
    pub wavelengths: usize,
    #[arg(long, default_value_t = 10_000)]
    pub pool: u64,
    #[arg(long, default_value_t = 100_000)]
    pub genome: u32,
    #[arg(long, default_value_t = 200)]
    pub sites: u32,
    #[arg(long, default_value_t = 20)]
    pub n_chal: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 2000)]
    pub coverage: u64,
    #[arg(long, default_value_t = 0.036)]
    pub p_seq_err: f64,
    #[arg(long, default_value_t = 0.001)]
    pub p_edit: f64,
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    Clone(GameArgs),
    OpenClone(GameArgs),
    Predict(GameArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Dye,
    Ordna,
    Gse,
}

const BOOLEAN_FLAGS: [&str; 5] = ["--stdout", "--help", "-h", "--version", "-V"];
const MANIFEST_SUFFIX: &str = ".manifest.json";

/// Entry point; returns the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(argv: I) -> i32 {
    let argv: Vec<String> = match argv.into_iter().map(|a| a.into_string()).collect() {
        Ok(v) => v,
        Err(_) => {
            eprintln!("cfi: arguments must be valid UTF-8");
            return exit::USAGE;
        }
    };
    match execute(argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cfi: {e}");
            e.exit_code()
        }
    }
}

/// Parses (after splicing any `--config`) and runs. `Ok` carries the exit
/// code of a completed run.
pub fn execute(argv: Vec<String>) -> Result<i32> {
    let argv = splice_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    let mut ctx = RunCtx::new(&cli.global, &argv)?;
    match cli.command {
        Command::Bounds(cmd) => bounds(&mut ctx, cmd),
        Command::Simulate(cmd) => simulate(&mut ctx, cmd),
        Command::Game(cmd) => game(&mut ctx, cmd),
        Command::Replay { manifest } => replay(&manifest),
    }
}

fn config_path(argv: &[String]) -> Option<(usize, usize, String)> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).map(|v| (i, 2, v.clone()))
        } else {
            a.strip_prefix("--config=").map(|v| (i, 1, v.to_string()))
        }
    })
}

/// Index just past the subcommand path.
fn subcommand_end(argv: &[String]) -> usize {
    let mut depth_needed = 2;
    let mut seen = 0;
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if a == "--" {
            return i;
        }
        if a.starts_with('-') {
            let takes_value = !a.contains('=') && !BOOLEAN_FLAGS.contains(&a.as_str());
            i += if takes_value { 2 } else { 1 };
            continue;
        }
        if seen == 0 && a == "replay" {
            depth_needed = 1;
        }
        seen += 1;
        i += 1;
        if seen == depth_needed {
            return i;
        }
    }
    argv.len()
}

/// Replaces `--config FILE` by the file's key/value pairs as flags, placed
/// right after the subcommand so that flags given on the command line
/// override them.
pub fn splice_config(mut argv: Vec<String>) -> Result<Vec<String>> {
    let Some((at, width, path)) = config_path(&argv) else {
        return Ok(argv);
    };
    argv.drain(at..at + width);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::format("config file", e))?;
    let Value::Object(map) = value else {
        return Err(CliError::format(
            "config file",
            "top level must be an object",
        ));
    };
    let mut tokens = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.trim_start_matches('-').replace('_', "-"));
        if flag == "--config" {
            return Err(CliError::format("config file", "nested config"));
        }
        let items = match v {
            Value::Array(items) => items,
            other => vec![other],
        };
        for item in items {
            match item {
                Value::Bool(true) => tokens.push(flag.clone()),
                Value::Bool(false) | Value::Null => {}
                Value::String(s) => tokens.extend([flag.clone(), s]),
                Value::Number(n) => tokens.extend([flag.clone(), n.to_string()]),
                _ => {
                    return Err(CliError::format(
                        "config file",
                        format!("{key}: unsupported value"),
                    ))
                }
            }
        }
    }
    let end = subcommand_end(&argv);
    argv.splice(end..end, tokens);
    Ok(argv)
}

/// Argument list stored in manifests: output routing removed and the
/// resolved seed appended.
fn replay_argv(argv: &[String], seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if a == "--out" {
            i += 2;
            continue;
        }
        if a == "--stdout" || a.starts_with("--out=") {
            i += 1;
            continue;
        }
        out.push(a.clone());
        i += 1;
    }
    out.extend(["--seed".into(), seed.to_string()]);
    out
}

struct RunCtx {
    seed: u64,
    trials: Option<u64>,
    jobs: usize,
    out: PathBuf,
    format: Format,
    stdout: bool,
    argv: Vec<String>,
    artifacts: Vec<ArtifactRecord>,
}

impl RunCtx {
    fn new(g: &Global, argv: &[String]) -> Result<Self> {
        let seed = g.seed.unwrap_or_else(|| rand::rng().random());
        let jobs = g.jobs.unwrap_or_else(default_jobs);
        if jobs == 0 {
            return Err(CliError::Parameter("--jobs must be at least 1".into()));
        }
        if g.trials == Some(0) {
            return Err(CliError::Parameter("--trials must be at least 1".into()));
        }
        Ok(Self {
            seed,
            trials: g.trials,
            jobs,
            out: g.out.clone(),
            format: g.format,
            stdout: g.stdout,
            argv: replay_argv(argv, seed),
            artifacts: Vec::new(),
        })
    }

    fn trials(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }

    fn ext(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn write(&mut self, file: &str, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.out).map_err(|e| CliError::io(&self.out, e))?;
        let path = self.out.join(file);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        if self.stdout {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
        self.artifacts.push(ArtifactRecord::of(file, bytes));
        eprintln!("wrote {}", path.display());
        Ok(())
    }

    fn manifest(&self, stem: &str, seeded: bool, parameters: Value) -> Manifest {
        let mut m = Manifest::new(self.argv.clone(), seeded.then_some(self.seed), parameters);
        m.table_id = Some(stem.into());
        m
    }

    fn finish(&mut self, stem: &str, mut manifest: Manifest) -> Result<()> {
        manifest.artifacts = std::mem::take(&mut self.artifacts);
        let file = format!("{stem}{MANIFEST_SUFFIX}");
        let path = self.out.join(&file);
        fs::write(&path, to_json(&manifest)?).map_err(|e| CliError::io(&path, e))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }
}

#[derive(Serialize)]
struct CellJson {
    row: String,
    col: String,
    value: ProbJson,
    printed: Option<ProbJson>,
    provenance: &'static str,
}

fn table_json(t: &TableArtifact) -> Result<String> {
    let mut cells = Vec::new();
    for (r, row) in t.rows.iter().enumerate() {
        for (c, col) in t.cols.iter().enumerate() {
            let cell = t.cell(r, c);
            cells.push(CellJson {
                row: row.clone(),
                col: col.clone(),
                value: cell.value.into(),
                printed: cell.printed.map(Into::into),
                provenance: cell.provenance.id(),
            });
        }
    }
    to_json(&json!({
        "id": t.id,
        "row_axis": t.row_axis,
        "col_axis": t.col_axis,
        "cells": cells,
    }))
}

fn emit_table(
    ctx: &mut RunCtx,
    table: &TableArtifact,
    report: &MismatchReport,
    manifest: &mut Manifest,
) -> Result<()> {
    let body = match ctx.format {
        Format::Csv => table.to_csv(),
        Format::Json => table_json(table)?,
    };
    ctx.write(&format!("{}.{}", table.id, ctx.ext()), body.as_bytes())?;
    emit_mismatch(ctx, report, manifest)?;
    manifest.provenance.extend(provenance_of(table));
    Ok(())
}

fn emit_mismatch(ctx: &mut RunCtx, report: &MismatchReport, manifest: &mut Manifest) -> Result<()> {
    let json = MismatchJson::from(report);
    ctx.write(
        &format!("{}.mismatch.json", report.artifact),
        to_json(&json)?.as_bytes(),
    )?;
    manifest.mismatches.push(json);
    Ok(())
}

/// `name,value` rows, or a JSON object of the same pairs.
fn key_values(ctx: &RunCtx, rows: &[(&str, String)]) -> Result<String> {
    Ok(match ctx.format {
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> = rows
                .iter()
                .map(|(k, v)| ((*k).to_string(), Value::String(v.clone())))
                .collect();
            to_json(&map)?
        }
    })
}

fn prob_text(p: LogProb) -> String {
    format!("{p:.6}")
}

fn mismatch_code(reports: &[&MismatchReport]) -> i32 {
    if reports.iter().any(|r| !r.entries.is_empty()) {
        exit::MISMATCH
    } else {
        exit::OK
    }
}

fn bounds(ctx: &mut RunCtx, cmd: BoundsCmd) -> Result<i32> {
    match cmd {
        BoundsCmd::Unpredictability => {
            let (table, report) = table_unpredictability()?;
            let mut m = ctx.manifest("unpredictability", false, json!({ "ell": 13 }));
            emit_table(ctx, &table, &report, &mut m)?;
            ctx.finish("unpredictability", m)?;
            Ok(mismatch_code(&[&report]))
        }
        BoundsCmd::Unclonability { support, k, n, t } => {
            let chain = unclonability_chain(support, k, n, t)?;
            let body = key_values(
                ctx,
                &[
                    ("p_e", format!("{:.9e}", chain.p_e)),
                    ("tau", prob_text(chain.tau)),
                    ("log10_tau", format!("{:.6}", chain.tau.log10())),
                ],
            )?;
            ctx.write(&format!("unclonability.{}", ctx.ext()), body.as_bytes())?;
            let m = ctx.manifest(
                "unclonability",
                false,
                json!({ "support": support, "k": k, "n": n, "t": t }),
            );
            ctx.finish("unclonability", m)?;
            Ok(exit::OK)
        }
        BoundsCmd::OrdnaRobustness => {
            let r = ordna_robustness_value()?;
            let body = key_values(
                ctx,
                &[
                    ("failure", prob_text(r.failure)),
                    ("printed_failure", prob_text(r.printed_failure)),
                    ("printed_is_bound", r.printed_is_bound.to_string()),
                ],
            )?;
            ctx.write(&format!("ordna-robustness.{}", ctx.ext()), body.as_bytes())?;
            let mut m = ctx.manifest(
                "ordna-robustness",
                false,
                json!({ "n": 255, "t": 111, "p": 0.17 }),
            );
            emit_mismatch(ctx, &r.report, &mut m)?;
            ctx.finish("ordna-robustness", m)?;
            Ok(mismatch_code(&[&r.report]))
        }
        BoundsCmd::GseRobustness { mode } => {
            let modes: &[TailMode] = match mode {
                ModeArg::Cdf => &[TailMode::Cdf],
                ModeArg::Sf => &[TailMode::Sf],
                ModeArg::Both => &[TailMode::Cdf, TailMode::Sf],
            };
            let mut m = ctx.manifest("gse-robustness", false, json!({ "p": 0.036 }));
            let mut reports = Vec::new();
            for &mode in modes {
                let (table, report) = table_gse_robustness(mode)?;
                emit_table(ctx, &table, &report, &mut m)?;
                reports.push(report);
            }
            ctx.finish("gse-robustness", m)?;
            Ok(mismatch_code(&reports.iter().collect::<Vec<_>>()))
        }
        BoundsCmd::DecisionBoundary {
            pmin,
            pmax,
            steps,
            p_edit,
        } => {
            let curve = decision_boundary_curve(pmin, pmax, steps, p_edit)?;
            let body = match ctx.format {
                Format::Csv => curve.to_csv(),
                Format::Json => to_json(&json!({
                    "p_edit": curve.p_edit,
                    "points": curve.points.iter().map(|&(p, t)| json!({ "p_e": p, "t": t })).collect::<Vec<_>>(),
                }))?,
            };
            ctx.write(&format!("decision-boundary.{}", ctx.ext()), body.as_bytes())?;
            let params = json!({ "pmin": pmin, "pmax": pmax, "steps": steps, "p_edit": p_edit });
            let m = ctx.manifest("decision-boundary", false, params);
            ctx.finish("decision-boundary", m)?;
            if !curve.is_strictly_increasing() {
                return Err(CliError::Check(
                    "decision boundary is not strictly increasing".into(),
                ));
            }
            Ok(exit::OK)
        }
        BoundsCmd::Schur { m, s, grid } => {
            let r = schur_check(m, s, grid)?;
            let fields = [
                ("categories", r.categories.to_string()),
                ("draws", r.draws.to_string()),
                ("grid", r.grid.to_string()),
                ("points", r.points.to_string()),
                ("symmetry_checks", r.symmetry_checks.to_string()),
                ("symmetry_violations", r.symmetry_violations.to_string()),
                ("majorizing_pairs", r.majorizing_pairs.to_string()),
                (
                    "majorization_violations",
                    r.majorization_violations.to_string(),
                ),
                (
                    "uniform_value",
                    format!("{}/{}", r.uniform_value.num, r.uniform_value.den),
                ),
                ("grid_max", format!("{}/{}", r.grid_max.num, r.grid_max.den)),
                ("uniform_is_max", r.uniform_is_max.to_string()),
            ];
            let body = key_values(ctx, &fields)?;
            ctx.write(&format!("schur.{}", ctx.ext()), body.as_bytes())?;
            let man = ctx.manifest("schur", false, json!({ "m": m, "s": s, "grid": grid }));
            ctx.finish("schur", man)?;
            if !r.passed() {
                return Err(CliError::Check(format!(
                    "{} symmetry and {} majorization violations",
                    r.symmetry_violations, r.majorization_violations
                )));
            }
            Ok(exit::OK)
        }
        BoundsCmd::Surrogate { nmin, nmax, dmax } => {
            if nmin < 2 || nmin > nmax || dmax == 0 {
                return Err(CliError::Parameter(
                    "need 2 <= nmin <= nmax and dmax >= 1".into(),
                ));
            }
            let mut body = String::from("n,d,log10_value\n");
            let mut decreasing = true;
            for d in 1..=dmax {
                let mut prev: Option<f64> = None;
                for n in nmin..=nmax {
                    let v = asymptotic_surrogate(n, d)?.log10();
                    decreasing &= prev.map_or(true, |p| v < p);
                    prev = Some(v);
                    body.push_str(&format!("{n},{d},{v:.9}\n"));
                }
            }
            ctx.write("surrogate.csv", body.as_bytes())?;
            let m = ctx.manifest(
                "surrogate",
                false,
                json!({ "nmin": nmin, "nmax": nmax, "dmax": dmax }),
            );
            ctx.finish("surrogate", m)?;
            if !decreasing {
                return Err(CliError::Check(
                    "surrogate is not strictly decreasing in n".into(),
                ));
            }
            Ok(exit::OK)
        }
    }
}

fn record<T: Serialize>(ctx: &mut RunCtx, stem: &str, report: &T) -> Result<()> {
    let body = match ctx.format {
        Format::Json => to_json(report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(report)
                .map_err(|e| CliError::format("CSV output", e))?;
            w.into_inner()
                .map_err(|e| CliError::format("CSV output", e.error()))?
                .into_iter()
                .map(char::from)
                .collect()
        }
    };
    ctx.write(&format!("{stem}.{}", ctx.ext()), body.as_bytes())
}

fn simulate(ctx: &mut RunCtx, cmd: SimulateCmd) -> Result<i32> {
    match cmd {
        SimulateCmd::Dye { p, wavelengths } => {
            let r = simulate_dye(p, wavelengths, ctx.trials(10_000), ctx.seed, ctx.jobs)?;
            eprintln!(
                "dye: {}/{} reconstructions, closed form {:.6}, covered {}",
                r.successes, r.trials, r.closed_form, r.covered
            );
            record(ctx, "simulate-dye", &r)?;
            let m = ctx.manifest(
                "simulate-dye",
                true,
                json!({ "p": p, "wavelengths": wavelengths }),
            );
            ctx.finish("simulate-dye", m)?;
        }
        SimulateCmd::Ordna {
            pool,
            counterfeits,
            enrollments,
            runs,
        } => {
            let mut cfg = OrdnaSimConfig::new(pool, ctx.seed);
            cfg.trials = ctx.trials(1000);
            cfg.counterfeits = counterfeits;
            cfg.enrollments = enrollments;
            cfg.extract.runs = runs;
            let r = simulate_ordna(&cfg, ctx.jobs)?;
            eprintln!(
                "ordna: genuine {}/{}, counterfeit {}/{}, keygen {}/{}, independent {}/{}",
                r.genuine_accepts,
                r.genuine_trials,
                r.counterfeit_accepts,
                r.counterfeit_trials,
                r.keygen_agreements,
                r.keygen_trials,
                r.independent_agreements,
                r.independent_trials
            );
            record(ctx, "simulate-ordna", &r)?;
            let params = json!({ "pool": pool, "counterfeits": counterfeits, "enrollments": enrollments, "runs": runs });
            let m = ctx.manifest("simulate-ordna", true, params);
            ctx.finish("simulate-ordna", m)?;
        }
        SimulateCmd::Gse {
            sites,
            genome,
            coverage,
            p_seq_err,
            p_edit,
        } => {
            let gen = GseGen {
                genome_length: genome,
                n_sites: sites,
                p_edit,
                seed: 0,
            };
            let seq = SeqModel {
                p_seq_err,
                coverage,
            };
            let r = simulate_gse(gen, seq, ctx.trials(100), ctx.seed, ctx.jobs)?;
            eprintln!(
                "gse: {}/{} position errors, ml_p_err {:.6e}, consistent {}",
                r.errors, r.positions, r.ml_p_err, r.consistent
            );
            record(ctx, "simulate-gse", &r)?;
            let params = json!({ "sites": sites, "genome": genome, "coverage": coverage, "p_seq_err": p_seq_err, "p_edit": p_edit });
            let m = ctx.manifest("simulate-gse", true, params);
            ctx.finish("simulate-gse", m)?;
        }
    }
    Ok(exit::OK)
}

fn unknown_adversary(name: &str, scheme: SchemeArg, kind: GameKind) -> CliError {
    CliError::Parameter(format!(
        "no adversary {name:?} for the {} game on {scheme:?}",
        kind.id()
    ))
}

fn clone_adversary<S: GameScheme>(name: &str) -> Option<DynClone<S>> {
    match name {
        "perfect-copy" => Some(Box::new(PerfectCopy)),
        "random-synthesis" => Some(Box::new(RandomSynthesis)),
        _ => None,
    }
}

fn predict_adversary<S: GameScheme>(name: &str, kappa: u32) -> Option<DynPredict<S>> {
    match name {
        "random-guess" => Some(Box::new(RandomGuess)),
        "neighborhood-replay" => Some(Box::new(NeighborhoodReplay { kappa })),
        _ => None,
    }
}

fn dye_clone(name: &str) -> Option<DynClone<Dye>> {
    match name {
        "full-table" => Some(Box::new(FullTable)),
        _ => clone_adversary(name),
    }
}

fn dye_predict(name: &str, kappa: u32) -> Option<DynPredict<Dye>> {
    match name {
        "full-table" => Some(Box::new(FullTablePredict::default())),
        _ => predict_adversary(name, kappa),
    }
}

fn gse_clone(name: &str) -> Option<DynClone<Gse>> {
    match name {
        "full-scan" => Some(Box::new(FullScan)),
        _ => clone_adversary(name),
    }
}

fn play<S>(
    ctx: &RunCtx,
    kind: GameKind,
    config: &GameConfig<S>,
    q: u64,
    trials: u64,
    clone: impl Fn() -> Option<DynClone<S>> + Sync,
    predict: impl Fn() -> Option<DynPredict<S>> + Sync,
) -> Result<Option<GameEstimate>>
where
    S: GameScheme,
    GameConfig<S>: Sync,
{
    Ok(match kind {
        GameKind::Predict => match predict() {
            Some(_) => Some(predict_game(
                config,
                |_| predict().expect("checked"),
                q,
                trials,
                ctx.seed,
                ctx.jobs,
            )?),
            None => None,
        },
        _ => match clone() {
            Some(_) => Some(clone_game(
                kind,
                config,
                |_| clone().expect("checked"),
                q,
                trials,
                ctx.seed,
                ctx.jobs,
            )?),
            None => None,
        },
    })
}

fn game(ctx: &mut RunCtx, cmd: GameCmd) -> Result<i32> {
    let (kind, a) = match cmd {
        GameCmd::Clone(a) => (GameKind::Clone, a),
        GameCmd::OpenClone(a) => (GameKind::OpenClone, a),
        GameCmd::Predict(a) => (GameKind::Predict, a),
    };
    let trials = ctx.trials(1000);
    let name = a.adversary.as_str();
    let (q, est, extra) = match a.scheme {
        SchemeArg::Dye => {
            let q = a.q.unwrap_or(8);
            let config =
                GameConfig::<Dye>::new(a.wavelengths, DyeParams::new(a.noise)?, DyeExtract)
                    .with_enrollment(Enrollment::Reference);
            let est = play(
                ctx,
                kind,
                &config,
                q,
                trials,
                || dye_clone(name),
                || dye_predict(name, a.kappa),
            )?;
            (q, est, Vec::new())
        }
        SchemeArg::Ordna => {
            let q = a.q.unwrap_or(100);
            let config = GameConfig::<Ordna>::new(
                OrdnaConfig::new(0, a.pool),
                OrdnaEval::default(),
                OrdnaExtract::default(),
            );
            let est = play(
                ctx,
                kind,
                &config,
                q,
                trials,
                || clone_adversary(name),
                || predict_adversary(name, a.kappa),
            )?;
            let extra = if kind == GameKind::Predict && name == "random-guess" {
                vec![("random-guess-bound", guess_bound(256))]
            } else {
                Vec::new()
            };
            (q, est, extra)
        }
        SchemeArg::Gse => {
            let q = a.q.unwrap_or(1000);
            let gen = GseGen {
                genome_length: a.genome,
                n_sites: a.sites,
                p_edit: a.p_edit,
                seed: 0,
            };
            let config = GameConfig::<Gse>::new(
                GseGameParams {
                    gen,
                    n_chal: a.n_chal,
                },
                SeqModel {
                    p_seq_err: a.p_seq_err,
                    coverage: a.coverage,
                },
                GseExtract {
                    parent_n: 31,
                    t: a.t,
                },
            );
            let est = play(
                ctx,
                kind,
                &config,
                q,
                trials,
                || gse_clone(name),
                || predict_adversary(name, a.kappa),
            )?;
            let mut extra = Vec::new();
            if kind == GameKind::OpenClone && name == "full-scan" {
                let rates = GseRates {
                    p_seq_err: a.p_seq_err,
                    p_edit: a.p_edit,
                };
                let (t, n) = (a.t as u64, a.n_chal as u64);
                extra.push(("clone_success_gse", clone_success_gse(t, n, q, rates)?));
                extra.push((
                    "clone_success_exact",
                    clone_success_exact(t, n, a.coverage, q, rates)?,
                ));
            }
            (q, est, extra)
        }
    };
    let Some(est) = est else {
        return Err(unknown_adversary(name, a.scheme, kind));
    };
    let mut report = GameReport::new(&est, ctx.seed);
    for (label, value) in extra {
        report.attach(label, value);
    }
    eprintln!(
        "{} {} vs {}: {}/{} successes, q = {q}",
        report.game, report.scheme, report.adversary, report.successes, report.trials
    );
    let stem = format!("game-{}-{}", kind.id(), report.scheme);
    ctx.write(&format!("{stem}.json"), to_json(&report)?.as_bytes())?;
    let params = json!({ "game": kind.id(), "scheme": report.scheme, "adversary": name, "q": q, "trials": trials });
    let m = ctx.manifest(&stem, true, params);
    ctx.finish(&stem, m)?;
    Ok(exit::OK)
}

/// Reruns `manifest` into a scratch directory and compares digests.
/// Exit 0 when every artifact is byte-identical, 1 otherwise.
pub fn replay(path: &Path) -> Result<i32> {
    let manifest = Manifest::read(path)?;
    if manifest.argv.iter().any(|a| a == "replay") {
        return Err(CliError::format(
            "manifest",
            "argument list is itself a replay",
        ));
    }
    let scratch = std::env::temp_dir().join(format!(
        "cfi-replay-{}-{}",
        std::process::id(),
        rand::rng().random::<u64>()
    ));
    let mut argv = vec!["cfi".to_string()];
    argv.extend(manifest.argv.iter().cloned());
    argv.extend(["--out".into(), scratch.display().to_string()]);
    let code = execute(argv);
    let result = compare(&manifest, &scratch, code);
    let _ = fs::remove_dir_all(&scratch);
    result
}

fn compare(manifest: &Manifest, dir: &Path, code: Result<i32>) -> Result<i32> {
    let code = code?;
    if code != exit::OK && code != exit::MISMATCH {
        return Err(CliError::Check(format!("rerun exited with {code}")));
    }
    let mut differ = 0;
    for a in &manifest.artifacts {
        let path = dir.join(&a.file);
        let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        let now = ArtifactRecord::of(&a.file, &bytes);
        if now.sha256 == a.sha256 {
            eprintln!("identical {}", a.file);
        } else {
            eprintln!("DIFFERS {}: {} != {}", a.file, now.sha256, a.sha256);
            differ += 1;
        }
    }
    if differ > 0 {
        return Err(CliError::Check(format!(
            "{differ} of {} artifacts differ",
            manifest.artifacts.len()
        )));
    }
    eprintln!("replay: {} artifacts identical", manifest.artifacts.len());
    Ok(exit::OK)
}
