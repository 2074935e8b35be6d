//! Acceptance suite: one PASS/FAIL line per criterion. Reference values
//! come from oracles written here (big-integer and rational arithmetic,
//! brute force), not from the code under test.
//!
//! A criterion that cannot hold is printed as FAIL with the reason. The
//! process still succeeds when such a criterion is in exactly the state the
//! analysis predicts; any other failure exits non-zero.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cfi::parallel::{clone_game, default_jobs, map_trials};
use cfi::sim::{simulate_dye, simulate_ordna, OrdnaSimConfig};
use cfi_core::bounds::{
    asymptotic_surrogate, decision_boundary_curve, ordna_robustness_value, schur_check,
    table_gse_robustness, table_unpredictability, unclonability_chain, Provenance, TailMode,
};
use cfi_core::codes::{Hamming74, ReedSolomon};
use cfi_core::dye::dye_robustness;
use cfi_core::estimate::{wilson_interval_z, within_sigmas};
use cfi_core::exactprob::{clone_success_gse, ml_p_err, GseRates};
use cfi_core::games::{FullScan, GameConfig, GameKind, GseGameParams};
use cfi_core::gse::{
    adversary_full_scan, clone_success_exact, gse_gen, GseExtract, GseGen, SeqModel,
};
use cfi_core::ordna::{minhash_signature, KmerProfile};
use cfi_core::rng::{derive_seed, stream_rng, SimRng};
use cfi_core::{BinomialSpec, DecodeOutcome};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

// ---------------------------------------------------------------- oracles

fn choose(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_u64().expect("60 bits fit") as f64;
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// `P[Bin(n, a/b) ∈ range]` as `numerator / b^n`.
fn binomial_mass(n: u64, a: u64, b: u64, range: impl Iterator<Item = u64>) -> (BigUint, BigUint) {
    let mut num = BigUint::zero();
    for i in range {
        num += choose(n, i)
            * BigUint::from(a).pow(i as u32)
            * BigUint::from(b - a).pow((n - i) as u32);
    }
    (num, BigUint::from(b).pow(n as u32))
}

fn log10_mass(n: u64, a: u64, b: u64, range: impl Iterator<Item = u64>) -> f64 {
    let (num, den) = binomial_mass(n, a, b, range);
    log10_big(&num) - log10_big(&den)
}

fn rational_mass(n: u64, a: u64, b: u64, range: impl Iterator<Item = u64>) -> f64 {
    let (num, den) = binomial_mass(n, a, b, range);
    BigRational::new(num.into(), den.into())
        .to_f64()
        .expect("finite")
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Rounds to `digits` significant figures, returning mantissa and exponent.
fn sig(x: f64, digits: i32) -> (f64, i32) {
    let e = x.log10().floor() as i32;
    let scale = 10f64.powi(digits - 1);
    let mut m = (x / 10f64.powi(e) * scale).round() / scale;
    let mut e = e;
    if m >= 10.0 {
        m /= 10.0;
        e += 1;
    }
    (m, e)
}

// ---------------------------------------------------------------- harness

struct Outcome {
    pass: bool,
    /// Failure that the analysis predicts; does not fail the run.
    known: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Self {
            pass,
            known: false,
            detail,
        }
    }
}

struct Suite {
    unexpected: Vec<u32>,
}

impl Suite {
    fn run(&mut self, id: u32, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        if took > budget {
            o.pass = false;
            o.known = false;
            o.detail.push_str(&format!("; over budget {budget:?}"));
        }
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let known = if !o.pass && o.known {
            " (expected, see mismatch report)"
        } else {
            ""
        };
        println!(
            "criterion {id:>2}: {verdict}{known} [{:.2?}] {}",
            took, o.detail
        );
        if !o.pass && !o.known {
            self.unexpected.push(id);
        }
    }
}

fn main() {
    let mut suite = Suite {
        unexpected: Vec::new(),
    };
    let s = |n: u64| Duration::from_secs(n);
    suite.run(1, s(1), table1);
    suite.run(2, s(1), unclonability);
    suite.run(3, s(5), ordna_robustness);
    suite.run(4, s(30), codecs);
    suite.run(5, s(10), minhash);
    suite.run(6, s(60), schur);
    suite.run(7, s(120), gse_analytics);
    suite.run(8, s(300), protocols);
    suite.run(9, s(10), dye);
    suite.run(10, s(1), surrogate);
    suite.run(11, s(30), mismatch_reports);
    if !suite.unexpected.is_empty() {
        println!("unexpected failures: {:?}", suite.unexpected);
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- criteria

/// Printed σ(13, κ, q), κ by row, q = 10^0 … 10^5 by column.
const TABLE1: [[(f64, i32); 6]; 3] = [
    [
        (6.1, -7),
        (6.1, -6),
        (6.1, -5),
        (6.1, -4),
        (6.1, -3),
        (6.1, -2),
    ],
    [
        (1.1, -5),
        (1.1, -4),
        (1.1, -3),
        (1.1, -2),
        (1.1, -1),
        (1.0, 0),
    ],
    [
        (1.3, -4),
        (1.3, -3),
        (1.3, -2),
        (1.3, -1),
        (1.0, 0),
        (1.0, 0),
    ],
];

fn table1() -> Outcome {
    let (table, report) = table_unpredictability().expect("table");
    let ell = 13u64;
    let four_l = BigUint::from(4u32).pow(ell as u32);
    let mut exact_ok = true;
    let mut matches = 0;
    let mut misses = Vec::new();
    let mut alt_explains = true;
    for (r, kappa) in (1..=3u64).enumerate() {
        let phi: BigUint = (0..=kappa)
            .map(|i| choose(ell, i) * BigUint::from(3u32).pow(i as u32))
            .sum();
        for c in 0..6 {
            let q = BigUint::from(10u32).pow(c as u32);
            let num = BigUint::one() + &q * &phi;
            let oracle = if num >= four_l {
                1.0
            } else {
                BigRational::new(num.into(), four_l.clone().into())
                    .to_f64()
                    .unwrap()
            };
            let got = table.cell(r, c).value.value();
            exact_ok &= rel_err(got, oracle) < 1e-12;
            let printed = TABLE1[r][c];
            if sig(oracle, 2) == printed {
                matches += 1;
            } else {
                misses.push(format!("kappa={kappa},q=1e{c}"));
                // the other reading: q (Phi + 1) / 4^l
                let alt = BigRational::new((&q * (&phi + 1u32)).into(), four_l.clone().into())
                    .to_f64()
                    .unwrap();
                alt_explains &= sig(alt.min(1.0), 2) == printed;
            }
        }
    }
    let reported = table.count(Provenance::MismatchReported);
    let state =
        exact_ok && matches == 13 && reported == 5 && report.entries.len() == 5 && alt_explains;
    Outcome {
        pass: exact_ok && matches == 18,
        known: state,
        detail: format!(
            "values exact to 1e-12: {exact_ok}; {matches}/18 cells match printed at 2 s.f.; mismatches {misses:?} \
             reproduce as q(Phi+1)/4^13: {alt_explains}"
        ),
    }
}

fn unclonability() -> Outcome {
    let chain = unclonability_chain(200, 8, 255, 111).expect("chain");
    let pe_exact = 200.0 / 65536.0;
    let pe_ok = chain.p_e <= 0.0031 && (chain.p_e - pe_exact).abs() <= 1e-6;
    // τ = P[Bin(255, 200/65536) ≥ 144]
    let oracle = log10_mass(255, 200, 65536, 144..=255);
    let got = chain.tau.log10();
    let tau_ok = got <= -280.0 && (got - oracle).abs() <= 1e-9 * oracle.abs();
    Outcome::check(
        pe_ok && tau_ok,
        format!(
            "p_e = {:.7}, log10 tau = {got:.6} (oracle {oracle:.6})",
            chain.p_e
        ),
    )
}

fn ordna_robustness() -> Outcome {
    let r = ordna_robustness_value().expect("value");
    let oracle = log10_mass(255, 17, 100, 112..=255);
    let got = r.failure.log10();
    let exact_ok = (got - oracle).abs() <= 1e-9 * oracle.abs();
    let bound_ok = r.failure.value() <= 1.7e-15 && r.printed_is_bound;
    let mut worst: f64 = 0.0;
    for &(a, b) in &[(1u64, 10u64), (17, 100), (1, 2), (3, 7), (9, 10)] {
        let p = a as f64 / b as f64;
        for n in 1..=30u64 {
            let spec = BinomialSpec::new(n, p).unwrap();
            for t in 0..=n {
                let cdf = rational_mass(n, a, b, 0..=t);
                let sf = rational_mass(n, a, b, t..=n);
                let pmf = rational_mass(n, a, b, t..=t);
                worst = worst
                    .max(rel_err(spec.cdf(t).unwrap().value(), cdf))
                    .max(rel_err(spec.sf(t).unwrap().value(), sf))
                    .max(rel_err(spec.pmf(t).value(), pmf));
            }
        }
    }
    Outcome::check(
        exact_ok && bound_ok && worst <= 1e-12,
        format!(
            "P[Bin(255,0.17) > 111] = {:.4e} (oracle log10 {oracle:.6}) <= 1.7e-15: {bound_ok}; \
             worst relative error n <= 30: {worst:.2e}",
            r.failure.value()
        ),
    )
}

fn codecs() -> Outcome {
    // Hamming(7,4): brute-force nearest codeword over all 128 words
    let h = Hamming74;
    let codewords: Vec<(u8, u8)> = (0..16u8).map(|m| (m, h.encode(m).unwrap())).collect();
    let mut hamming_ok = true;
    for w in 0..128u8 {
        let (m, _) = codewords
            .iter()
            .min_by_key(|(_, c)| (c ^ w).count_ones())
            .unwrap();
        hamming_ok &= h.decode(w).unwrap() == *m;
    }
    let rs = ReedSolomon::rs255();
    let mut rng = SimRng::seed_from_u64(0x5253);
    let mut corrected = 0;
    for _ in 0..1000 {
        let msg: Vec<u8> = (0..32).map(|_| rng.random()).collect();
        let mut word = rs.encode(&msg).unwrap();
        for i in rand::seq::index::sample(&mut rng, 255, 111) {
            word[i] ^= rng.random_range(1..=255u8);
        }
        if rs.decode(&word).unwrap()
            == (DecodeOutcome::Decoded {
                message: msg,
                corrected: 111,
            })
        {
            corrected += 1;
        }
    }
    let mut rejected = 0;
    for _ in 0..10_000 {
        let word: Vec<u8> = (0..255).map(|_| rng.random()).collect();
        rejected += rs.decode(&word).unwrap().is_failure() as u32;
    }
    Outcome::check(
        hamming_ok && corrected == 1000 && rejected >= 9900,
        format!("Hamming exhaustive {hamming_ok}; RS corrected {corrected}/1000 weight-111; rejected {rejected}/10000 uniform"),
    )
}

/// Twenty multiset pairs with known weighted Jaccard similarity, from
/// identical through disjoint.
fn jaccard_pairs() -> Vec<(BTreeMap<u32, u32>, BTreeMap<u32, u32>)> {
    let mut rng = SimRng::seed_from_u64(0x4a41);
    let mut pairs = Vec::new();
    for i in 0..20u32 {
        let support = 10 + 6 * i as usize;
        let mut a = BTreeMap::new();
        while a.len() < support {
            a.insert(rng.random_range(0..65536u32), rng.random_range(1..=12u32));
        }
        let mut b = BTreeMap::new();
        let keep = i as f64 / 19.0;
        for (&k, &w) in &a {
            if rng.random_bool(keep) {
                // same k-mer, perturbed multiplicity
                let w2 = if rng.random_bool(0.5) {
                    w
                } else {
                    rng.random_range(1..=12u32)
                };
                b.insert(k, w2);
            }
        }
        while b.len() < support {
            let k = rng.random_range(0..65536u32);
            if !a.contains_key(&k) {
                b.insert(k, rng.random_range(1..=12u32));
            }
        }
        pairs.push((a, b));
    }
    pairs
}

fn exact_jaccard(a: &BTreeMap<u32, u32>, b: &BTreeMap<u32, u32>) -> f64 {
    let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    let (mut num, mut den) = (0u64, 0u64);
    for k in keys {
        let (x, y) = (
            a.get(&k).copied().unwrap_or(0),
            b.get(&k).copied().unwrap_or(0),
        );
        num += x.min(y) as u64;
        den += x.max(y) as u64;
    }
    num as f64 / den as f64
}

fn minhash() -> Outcome {
    const COORDS: usize = 7650;
    let pairs = jaccard_pairs();
    let mut sum_rate = 0.0;
    let mut sum_j = 0.0;
    let mut var = 0.0;
    let mut per_pair_ok = 0;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let j = exact_jaccard(a, b);
        let pa = KmerProfile::from_counts(8, a.iter().map(|(&k, &w)| (k, w)));
        let pb = KmerProfile::from_counts(8, b.iter().map(|(&k, &w)| (k, w)));
        let seed = derive_seed(0x6d68, i as u64);
        let sa = minhash_signature(&pa, seed, COORDS).unwrap();
        let sb = minhash_signature(&pb, seed, COORDS).unwrap();
        let hits = sa.iter().zip(&sb).filter(|(x, y)| x == y).count() as u64;
        let rate = hits as f64 / COORDS as f64;
        per_pair_ok += within_sigmas(j, hits, COORDS as u64, 3.0) as u32;
        sum_rate += rate;
        sum_j += j;
        var += j * (1.0 - j) / COORDS as f64;
    }
    let n = pairs.len() as f64;
    let (mean_rate, mean_j, sigma) = (sum_rate / n, sum_j / n, var.sqrt() / n);
    let ok = (mean_rate - mean_j).abs() <= 3.0 * sigma;
    Outcome::check(
        ok,
        format!(
            "mean collision rate {mean_rate:.5} vs mean J {mean_j:.5} (3 sigma = {:.5}); {per_pair_ok}/20 pairs within 3 sigma individually",
            3.0 * sigma
        ),
    )
}

/// `F(uniform) = m · E[min(B, B')]` with `B, B'` independent `Bin(s, 1/m)`.
fn schur_uniform_oracle(m: u64, s: u64) -> BigRational {
    let pmf = |k: u64| {
        let (num, den) = binomial_mass(s, 1, m, k..=k);
        BigRational::new(num.into(), den.into())
    };
    let mut e = BigRational::zero();
    for x in 0..=s {
        for y in 0..=s {
            e += pmf(x) * pmf(y) * BigRational::from_integer(x.min(y).into());
        }
    }
    e * BigRational::from_integer(m.into())
}

fn schur() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for m in 2..=4usize {
        for s in 2..=3u32 {
            let r = schur_check(m, s, 10).expect("check");
            let uniform = BigRational::new(r.uniform_value.num.into(), r.uniform_value.den.into());
            let oracle_ok = uniform == schur_uniform_oracle(m as u64, s as u64);
            ok &= r.passed() && oracle_ok;
            lines.push(format!(
                "m={m},s={s}: {} pts, {} sym/{} maj violations, uniform max {}, oracle {}",
                r.points,
                r.symmetry_violations,
                r.majorization_violations,
                r.uniform_is_max,
                oracle_ok
            ));
        }
    }
    Outcome::check(ok, lines.join("; "))
}

/// Per-read log-likelihood ratio at edit fraction `b`; zero on the boundary.
fn llr_per_read(b: f64, p_seq_err: f64, p_edit: f64) -> f64 {
    let pd = p_edit * (1.0 - p_seq_err) + (1.0 - p_edit) * p_seq_err;
    b * (pd / p_seq_err).ln() + (1.0 - b) * ((1.0 - pd) / (1.0 - p_seq_err)).ln()
}

fn gse_analytics() -> Outcome {
    let jobs = default_jobs();
    let mut details = Vec::new();
    let p_edit = 0.001;
    let curve = decision_boundary_curve(1e-3, 5e-2, 200, p_edit).expect("curve");
    let on_boundary = curve
        .points
        .iter()
        .all(|&(p, b)| llr_per_read(b, p, p_edit).abs() < 1e-12);
    let curve_ok = curve.is_strictly_increasing() && on_boundary && curve.points.len() == 200;
    details.push(format!(
        "curve increasing and on the LLR = 0 line: {curve_ok}"
    ));

    let mut error_ok = true;
    for &pe in &[0.001, 0.05] {
        for &q in &[10u64, 100, 1000] {
            let gen = GseGen {
                genome_length: 100_000,
                n_sites: 500,
                p_edit: pe,
                seed: 0,
            };
            let expected = ml_p_err(q, 0.036, pe).unwrap();
            let errs = map_trials(jobs, 100, |i| {
                let profile = gse_gen(&GseGen {
                    seed: derive_seed(q ^ 0x6d6c, i),
                    ..gen
                })?;
                let coords = profile.coords();
                let guess =
                    adversary_full_scan(&profile, q, 0.036, &coords, &mut stream_rng(0x6164, i))?;
                Ok(profile
                    .sites()
                    .iter()
                    .zip(&guess)
                    .filter(|(s, &g)| s.bit != g)
                    .count() as u64)
            })
            .unwrap();
            let errors: u64 = errs.iter().sum();
            let ok = within_sigmas(expected, errors, 50_000, 3.0);
            error_ok &= ok;
            details.push(format!(
                "p_edit={pe} q={q}: {errors}/50000 vs {expected:.5} {ok}"
            ));
        }
    }

    // open-clone game at the printed operating point
    let game = |pe: f64, q: u64, trials: u64, seed: u64| {
        let gen = GseGen {
            genome_length: 100_000,
            n_sites: 200,
            p_edit: pe,
            seed: 0,
        };
        let config = GameConfig::new(
            GseGameParams { gen, n_chal: 20 },
            SeqModel {
                p_seq_err: 0.036,
                coverage: 2000,
            },
            GseExtract { parent_n: 31, t: 2 },
        );
        clone_game(
            GameKind::OpenClone,
            &config,
            |_| FullScan,
            q,
            trials,
            seed,
            jobs,
        )
        .unwrap()
    };
    let rates = GseRates {
        p_seq_err: 0.036,
        p_edit,
    };
    let printed = clone_success_gse(2, 20, 1000, rates).unwrap().value();
    let est = game(p_edit, 1000, 10_000, 77);
    let game_ok = within_sigmas(printed, est.successes, est.trials, 3.0);
    details.push(format!(
        "open-clone q=1000: {}/{} vs clone_success_gse {printed:.3e} {game_ok}",
        est.successes, est.trials
    ));

    // where the game has power: exact oracle must hold
    let rates = GseRates {
        p_seq_err: 0.036,
        p_edit: 0.05,
    };
    let exact = clone_success_exact(2, 20, 2000, 50, rates).unwrap().value();
    let est = game(0.05, 50, 4000, 78);
    let exact_ok = within_sigmas(exact, est.successes, est.trials, 3.0);
    details.push(format!(
        "open-clone p_edit=0.05 q=50: {}/{} vs exact {exact:.4} {exact_ok}",
        est.successes, est.trials
    ));

    Outcome::check(
        curve_ok && error_ok && game_ok && exact_ok,
        details.join("; "),
    )
}

fn protocols() -> Outcome {
    let mut cfg = OrdnaSimConfig::new(100_000, 0x6f72);
    cfg.trials = 1000;
    cfg.counterfeits = 10_000;
    cfg.enrollments = 50;
    let r = simulate_ordna(&cfg, default_jobs()).expect("simulation");
    let ok = r.acceptance_rate >= 0.99
        && r.counterfeit_accepts == 0
        && r.keygen_agreement_rate >= 0.99
        && r.independent_agreements == 0
        && r.counterfeit_trials == 10_000
        && r.independent_trials == 10_000;
    Outcome::check(
        ok,
        format!(
            "genuine {}/{}, counterfeits rejected {}/{}, replica keys agree {}/{}, independent keys disagree {}/{}",
            r.genuine_accepts,
            r.genuine_trials,
            r.counterfeit_trials - r.counterfeit_accepts,
            r.counterfeit_trials,
            r.keygen_agreements,
            r.keygen_trials,
            r.independent_trials - r.independent_agreements,
            r.independent_trials
        ),
    )
}

fn dye() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (i, &p) in [0.01, 0.05, 0.1].iter().enumerate() {
        let closed = (1.0f64 - p).powi(7) + 7.0 * p * (1.0f64 - p).powi(6);
        let r = simulate_dye(p, 8, 10_000, 0x6479 + i as u64, default_jobs()).expect("simulation");
        let iv = wilson_interval_z(r.successes, r.trials, 3.0);
        let covered = iv.contains(closed) && (dye_robustness(p) - closed).abs() < 1e-15;
        ok &= covered && r.trials == 10_000;
        details.push(format!(
            "p={p}: {}/10000, [{:.4}, {:.4}] vs {closed:.4} {covered}",
            r.successes, iv.lo, iv.hi
        ));
    }
    Outcome::check(ok, details.join("; "))
}

fn surrogate() -> Outcome {
    let mut decreasing = true;
    let mut worst: f64 = 0.0;
    for d in 1..=8u32 {
        let mut prev = f64::INFINITY;
        for n in 64..=4096u32 {
            let v = asymptotic_surrogate(n, d).unwrap().log10();
            decreasing &= v < prev;
            prev = v;
            if n % 512 == 64 {
                // log10(n^d (1 + n^d Phi(2n, 3)) / 4^(2n))
                let l = 2 * n as u64;
                let phi: BigUint = (0..=3u64)
                    .map(|i| choose(l, i) * BigUint::from(3u32).pow(i as u32))
                    .sum();
                let nd = BigUint::from(n).pow(d);
                let num = &nd * (BigUint::one() + &nd * phi);
                let oracle = log10_big(&num) - 2.0 * l as f64 * std::f64::consts::LOG10_2;
                worst = worst.max((v - oracle).abs() / oracle.abs());
            }
        }
    }
    Outcome::check(
        decreasing && worst < 1e-9,
        format!("strictly decreasing {decreasing}; worst log10 rel err {worst:.1e}"),
    )
}

fn mismatch_reports() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().display().to_string();
    let run = |args: &[&str]| {
        let mut argv = vec!["cfi".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--out".into(), out.clone()]);
        cfi::cli::execute(argv).expect("run")
    };
    let codes = (
        run(&["bounds", "gse-robustness", "--mode", "both"]),
        run(&["bounds", "ordna-robustness"]),
    );
    let read = |name: &str| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).expect(name))
            .expect(name)
    };
    let log10_of = |v: &serde_json::Value| v["log10"].as_f64().unwrap_or(f64::NEG_INFINITY);
    let mut ok = codes == (2, 2);
    let mut checked = 0;
    for file in [
        "gse-robustness-cdf.mismatch.json",
        "gse-robustness-sf.mismatch.json",
    ] {
        let report = read(file);
        let entries = report["entries"].as_array().cloned().unwrap_or_default();
        ok &= entries.len() == 35;
        for e in &entries {
            let loc = e["location"].as_str().unwrap();
            let (n, t) = loc
                .strip_prefix("n=")
                .and_then(|s| s.split_once(",t="))
                .unwrap();
            let (n, t): (u64, u64) = (n.parse().unwrap(), t.parse().unwrap());
            let interp = e["interpretations"].as_array().unwrap();
            let find = |name: &str| {
                interp
                    .iter()
                    .find(|i| i["name"] == name)
                    .map(|i| log10_of(&i["value"]))
            };
            let (Some(cdf), Some(sf)) = (find("P[X <= t]"), find("P[X > t]")) else {
                ok = false;
                continue;
            };
            // exact masses at p = 9/250
            let o_cdf = log10_mass(n, 9, 250, 0..=t);
            let o_sf = if t >= n {
                f64::NEG_INFINITY
            } else {
                log10_mass(n, 9, 250, t + 1..=n)
            };
            let close = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-9 * b.abs().max(1.0);
            let sum = 10f64.powf(cdf) + 10f64.powf(sf);
            ok &= close(cdf, o_cdf) && close(sf, o_sf) && (sum - 1.0).abs() < 1e-12;
            checked += 1;
        }
    }
    let report = read("ordna-robustness.mismatch.json");
    let interp = report["entries"][0]["interpretations"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    let gt = interp
        .iter()
        .find(|i| i["name"] == "P[X > t]")
        .map(|i| log10_of(&i["value"]));
    let ge = interp
        .iter()
        .find(|i| i["name"] == "P[X >= t]")
        .map(|i| log10_of(&i["value"]));
    let ordna_ok = match (gt, ge) {
        (Some(gt), Some(ge)) => {
            let o_gt = log10_mass(255, 17, 100, 112..=255);
            let o_ge = log10_mass(255, 17, 100, 111..=255);
            (gt - o_gt).abs() < 1e-9 * o_gt.abs()
                && (ge - o_ge).abs() < 1e-9 * o_ge.abs()
                && ge > gt
        }
        _ => false,
    };
    // manifests list the reports with matching digests
    let mut digests_ok = true;
    for stem in ["gse-robustness", "ordna-robustness"] {
        let m = read(&format!("{stem}.manifest.json"));
        for a in m["artifacts"].as_array().unwrap() {
            let file = a["file"].as_str().unwrap();
            let bytes = std::fs::read(dir.path().join(file)).unwrap();
            use sha2::Digest;
            digests_ok &=
                hex::encode(sha2::Sha256::digest(&bytes)) == a["sha256"].as_str().unwrap();
        }
        digests_ok &= !m["mismatches"].as_array().unwrap().is_empty();
    }
    // in-memory reports agree with the files
    let in_memory = table_gse_robustness(TailMode::Cdf).unwrap().1.entries.len() == 35
        && table_gse_robustness(TailMode::Sf).unwrap().1.entries.len() == 35;
    Outcome::check(
        ok && ordna_ok && digests_ok && in_memory && checked == 70,
        format!(
            "exit codes {codes:?}; {checked}/70 table entries carry both readings matching the exact oracle; \
             orDNA report consistent {ordna_ok}; manifest digests {digests_ok}"
        ),
    )
}
