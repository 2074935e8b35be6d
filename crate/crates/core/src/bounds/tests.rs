use super::*;
use alloc::vec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// log10 of a big integer from its top 64 bits.
fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap() as f64;
    libm::log10(top) + shift as f64 * core::f64::consts::LOG10_2
}

fn choose_big(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// `log10 P[Bin(n, a/b) ≥ from]` by exact integer summation.
fn tail_oracle(n: u64, a: u64, b: u64, from: u64) -> f64 {
    let mut num = BigUint::zero();
    for i in from..=n {
        num += choose_big(n, i)
            * BigUint::from(a).pow(i as u32)
            * BigUint::from(b - a).pow((n - i) as u32);
    }
    log10_big(&num) - n as f64 * libm::log10(b as f64)
}

#[test]
fn table_unpredictability_against_integer_oracle() {
    let (table, report) = table_unpredictability().unwrap();
    assert!(table.is_well_formed());
    assert_eq!(table.cells.len(), 18);
    let four13 = 4u128.pow(13);
    for (r, kappa) in [1u128, 2, 3].into_iter().enumerate() {
        // Φ by direct enumeration of the ball: Σ C(13, j) 3^j
        let phi: u128 = (0..=kappa)
            .map(|j| choose_big(13, j as u64).to_u64().unwrap() as u128 * 3u128.pow(j as u32))
            .sum();
        for c in 0..6 {
            let q = 10u128.pow(c as u32);
            let exact = ((1 + q * phi) as f64 / four13 as f64).min(1.0);
            let got = table.cell(r, c).value.value();
            assert!(
                (got - exact).abs() <= 1e-12 * exact,
                "kappa={kappa} q={q}: {got} vs {exact}"
            );
        }
    }
    assert_eq!(hamming_ball_volume(13, 1, 4).unwrap(), 40);
    assert!((table.cell(0, 0).value.value() - 6.1e-7).abs() < 0.05e-7);
    assert_eq!(table.cell(2, 4).value.value(), 1.0);
    assert!((table.cell(1, 2).value.value() - 1.1e-3).abs() < 0.05e-3);

    // (1 + qΦ)/4^13 rounds to 6.0 for κ = 1 and q ≥ 10; all other cells agree
    assert_eq!(table.count(Provenance::PaperMatch), 13);
    assert_eq!(table.count(Provenance::MismatchReported), 5);
    for c in 1..6 {
        assert_eq!(table.cell(0, c).provenance, Provenance::MismatchReported);
        assert_eq!(round_sig(table.cell(0, c).value, 2).0, 6.0);
    }
    assert_eq!(report.entries.len(), 5);
    for e in &report.entries {
        assert!(
            matches_printed(e.interpretations[1].value, e.printed, 2),
            "{e:?}"
        );
    }
}

#[test]
fn significant_figure_rounding() {
    assert_eq!(round_sig(LogProb::from_prob(5.975e-6), 2), (6.0, -6));
    assert_eq!(round_sig(LogProb::from_prob(9.96e-3), 2), (1.0, -2));
    assert_eq!(round_sig(LogProb::ONE, 2), (1.0, 0));
    assert!(matches_printed(
        LogProb::from_prob(1.1065e-5),
        LogProb::from_prob(1.1e-5),
        2
    ));
    assert!(!matches_printed(
        LogProb::from_prob(1.1e-5),
        LogProb::from_prob(1.1e-6),
        2
    ));
}

#[test]
fn unclonability_chain_example() {
    let chain = unclonability_chain(200, 8, 255, 111).unwrap();
    assert!((chain.p_e - 200.0 / 65536.0).abs() < 1e-12);
    assert!(chain.p_e <= 0.0031);
    // 200/65536 = 25/8192
    let oracle = tail_oracle(255, 25, 8192, 144);
    assert!(
        (chain.tau.log10() - oracle).abs() < 1e-9,
        "{} vs {oracle}",
        chain.tau.log10()
    );
    assert!(chain.tau.log10() <= -280.0);

    let full = unclonability_chain(65536, 8, 255, 111).unwrap();
    assert_eq!(full.p_e, 1.0);
    assert_eq!(full.tau.value(), 1.0);
    assert!(unclonability_chain(10, 2, 255, 256).is_err());
}

#[test]
fn ordna_robustness_exact_tail() {
    let r = ordna_robustness_value().unwrap();
    let oracle = tail_oracle(255, 17, 100, 112);
    assert!(
        (r.failure.log10() - oracle).abs() < 1e-9,
        "{} vs {oracle}",
        r.failure.log10()
    );
    assert!((r.failure.value() - 1.0272e-23).abs() < 1e-26);
    assert!(r.printed_is_bound);
    assert!(r.failure.value() <= 1.7e-15);
    let e = &r.report.entries[0];
    assert_eq!(e.interpretations.len(), 2);
    assert!(e.interpretations[1].value > e.interpretations[0].value);
    assert!(robustness_failure(255, 0.0, 111).unwrap().is_exact_zero());
    assert!(robustness_failure(10, 0.5, 10).unwrap().is_exact_zero());
}

#[test]
fn small_robustness_kernel_matches_rational_enumeration() {
    // n = 20, p = 0.17, t = 8
    let p = BigRational::new(17.into(), 100.into());
    let q = BigRational::one() - &p;
    let mut tail = BigRational::zero();
    for i in 9..=20u32 {
        let c = BigRational::from_integer(choose_big(20, i as u64).into());
        tail += c
            * num_traits::pow(p.clone(), i as usize)
            * num_traits::pow(q.clone(), (20 - i) as usize);
    }
    let exact = tail.to_f64().unwrap();
    let got = robustness_failure(20, 0.17, 8).unwrap().value();
    assert!((got - exact).abs() <= 1e-12 * exact, "{got} vs {exact}");
}

#[test]
fn gse_table_both_readings() {
    let (cdf, cdf_report) = table_gse_robustness(TailMode::Cdf).unwrap();
    let (sf, sf_report) = table_gse_robustness(TailMode::Sf).unwrap();
    assert!(cdf.is_well_formed() && sf.is_well_formed());
    assert_eq!(cdf.cells.len(), 35);

    // n = 10, t = 3: P[X ≥ 4] for X ~ Bin(10, 0.036), by hand
    let p: f64 = 0.036;
    let head: f64 = (0..=3)
        .map(|i| {
            choose_big(10, i).to_f64().unwrap() * p.powi(i as i32) * (1.0 - p).powi(10 - i as i32)
        })
        .sum();
    assert!((cdf.cell(0, 0).value.value() - head).abs() < 1e-14);
    assert!((sf.cell(0, 0).value.value() - 2.9616e-4).abs() < 1e-8);
    assert!((cdf.cell(0, 0).value.value() - 0.9997).abs() < 1e-4);

    for i in 0..35 {
        let (a, b) = (cdf.cells[i].value.value(), sf.cells[i].value.value());
        assert!((a + b - 1.0).abs() < 1e-12, "cell {i}");
    }
    // cdf rises and the tail falls along every row
    for r in 0..5 {
        for c in 1..7 {
            assert!(cdf.cell(r, c).value >= cdf.cell(r, c - 1).value);
            assert!(sf.cell(r, c).value < sf.cell(r, c - 1).value);
        }
    }
    // no cell agrees under either reading
    assert_eq!(cdf_report.entries.len(), 35);
    assert_eq!(sf_report.entries.len(), 35);
    assert!(cdf_report
        .entries
        .iter()
        .all(|e| e.interpretations.len() == 2));
    assert_eq!(gse_threshold(50, 3), 15);
    assert_eq!(gse_threshold(15, 3), 5);
}

#[test]
fn decision_boundary_curve_shape() {
    let curve = decision_boundary_curve(1e-3, 5e-2, 200, 0.001).unwrap();
    assert_eq!(curve.points.len(), 200);
    assert!(curve.is_strictly_increasing());
    assert!(curve.to_csv().starts_with("p_e,t\n"));
    assert_eq!(curve.to_csv().lines().count(), 201);
    let at = decision_boundary_curve(0.036, 0.037, 2, 0.001).unwrap();
    assert!((at.points[0].1 - 0.036462).abs() < 1e-5);
    assert!(decision_boundary_curve(0.05, 0.01, 10, 0.001).is_err());
    assert!(decision_boundary_curve(0.01, 0.05, 1, 0.001).is_err());
}

/// `F(p) = (1/m) Σ_{i,j} E[min(B_i, B_j)]` with independent
/// `B_i ~ Bin(s, p_i)`: the marginal form of the permutation average.
fn schur_marginal(p: &[f64], s: u32) -> f64 {
    let pmf = |x: f64| -> Vec<f64> {
        (0..=s)
            .map(|k| {
                choose_big(s as u64, k as u64).to_f64().unwrap()
                    * x.powi(k as i32)
                    * (1.0 - x).powi((s - k) as i32)
            })
            .collect()
    };
    let mut total = 0.0;
    for &a in p {
        for &b in p {
            let (pa, pb) = (pmf(a), pmf(b));
            for x in 0..=s as usize {
                for y in 0..=s as usize {
                    total += pa[x] * pb[y] * x.min(y) as f64;
                }
            }
        }
    }
    total / p.len() as f64
}

#[test]
fn schur_value_matches_marginal_form() {
    for (w, d, s) in [
        (vec![5u64, 3, 2], 10u64, 2u32),
        (vec![1, 1, 1, 1], 4, 3),
        (vec![7, 0, 13], 20, 4),
        (vec![1, 2, 3, 4, 10], 20, 4),
    ] {
        let inst = SchurInstance::new(w, d, s).unwrap();
        let got = schur_f(&inst).unwrap().to_f64();
        let want = schur_marginal(&inst.probabilities(), s);
        assert!((got - want).abs() < 1e-12, "{inst:?}: {got} vs {want}");
    }
}

#[test]
fn schur_examples() {
    let point = SchurInstance::new(vec![3, 0, 0], 3, 2).unwrap();
    let uniform = SchurInstance::uniform(3, 2).unwrap();
    let (fp, fu) = (schur_f(&point).unwrap(), schur_f(&uniform).unwrap());
    assert!(fp.checked_cmp(&fu).unwrap().is_le());
    // a point mass agrees with itself only when π fixes its category
    assert!((fp.to_f64() - 2.0 / 3.0).abs() < 1e-15);

    let base = SchurInstance::new(vec![5, 3, 2], 10, 2).unwrap();
    let f = schur_f(&base).unwrap();
    for perm in schur::permutations(3) {
        let moved =
            SchurInstance::new(perm.iter().map(|&i| base.weights()[i]).collect(), 10, 2).unwrap();
        assert_eq!(schur_f(&moved).unwrap().num, f.num);
    }

    let report = schur_check(3, 2, 20).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.points, 231);
    assert!(report.majorizing_pairs > 0 && report.symmetry_checks > 0);
}

#[test]
fn schur_limits() {
    assert!(SchurInstance::new(vec![1; 6], 6, 2).is_err());
    assert!(SchurInstance::new(vec![1, 1], 2, 5).is_err());
    assert!(SchurInstance::new(vec![1, 1], 3, 2).is_err());
    assert!(schur_check(6, 2, 10).is_err());
    // the largest admissible instance stays inside 128 bits
    let big = SchurInstance::new(vec![1, 2, 3, 4, 50], 60, 4).unwrap();
    assert!(schur_f(&big).is_ok());
    assert!(majorizes_exact(&[10, 0, 0], &[4, 3, 3]));
    assert!(!majorizes_exact(&[4, 3, 3], &[5, 5, 0]));
}

#[test]
fn random_output_bound() {
    let b = guess_bound(256);
    assert!((b.value() - 8.636e-78).abs() < 1e-80);
}

#[test]
fn asymptotic_surrogate_falls() {
    for d in 1..=8 {
        let mut prev = asymptotic_surrogate(64, d).unwrap();
        for n in 65..=4096 {
            let v = asymptotic_surrogate(n, d).unwrap();
            assert!(v < prev, "n={n} d={d}");
            prev = v;
        }
    }
}
