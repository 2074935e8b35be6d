use super::*;
use crate::codes::ReedSolomon;
use crate::framework::{Cfs, ChemicalFunction, Scheme};
use crate::rng::SimRng;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};

fn pool(seed: u64, size: u64) -> OrdnaProfile {
    ordna_gen(OrdnaConfig::new(seed, size)).unwrap()
}

#[test]
fn seq_text_and_bytes_round_trip() {
    let s: Seq = "ACGTTGCAAC".parse().unwrap();
    assert_eq!(alloc::format!("{s}"), "ACGTTGCAAC");
    assert_eq!(s.len(), 10);
    assert_eq!(Seq::from_bytes(&s.to_bytes()).unwrap(), s);
    let t: Seq = "ACGTTGCAAA".parse().unwrap();
    assert_eq!(s.hamming(&t), 1);
    assert_eq!(s.slice(2, 3).to_string(), "GTT");
    assert_eq!(s.slice(0, 4).concat(&s.slice(4, 6)), s);
    assert!("ACGU".parse::<Seq>().is_err());
    // padding bits of a 10-nt string live in the last byte
    let mut b = s.to_bytes();
    *b.last_mut().unwrap() |= 0x80;
    assert!(Seq::from_bytes(&b).is_err());
    assert!(Seq::from_bytes(&[3]).is_err());
}

#[test]
fn pools_are_deterministic() {
    let a = pool(7, 100_000);
    let b = pool(7, 100_000);
    let c = pool(8, 100_000);
    for i in 0..100 {
        assert_eq!(a.molecule(i), b.molecule(i));
    }
    assert!((0..100).any(|i| a.molecule(i) != c.molecule(i)));
}

#[test]
fn nucleotide_frequencies_are_uniform() {
    let p = pool(11, 100_000);
    let n = p.pool_size() as f64;
    let mut counts = vec![[0u64; 4]; p.challenge_len() + p.output_len()];
    for i in 0..p.pool_size() {
        let full = p.inputs(i).concat(&p.output(i));
        for (j, c) in counts.iter_mut().enumerate() {
            c[full.base(j) as usize] += 1;
        }
    }
    let sigma = (n * 0.25 * 0.75).sqrt();
    for (j, c) in counts.iter().enumerate() {
        for (b, &k) in c.iter().enumerate() {
            assert!(
                (k as f64 - n / 4.0).abs() < 3.0 * sigma,
                "position {j} base {b}: {k}"
            );
        }
    }
}

#[test]
fn layouts_and_stages() {
    let mut cfg = OrdnaConfig::new(1, 1000);
    let one = ordna_gen(cfg).unwrap();
    assert_eq!((one.challenge_len(), one.output_len()), (13, 21));
    cfg.stages = 2;
    let two = ordna_gen(cfg).unwrap();
    let m = two.molecule(5);
    assert_eq!(m.extra_inputs.len(), 2);
    assert_eq!(m.output.len(), 42);
    assert_eq!(two.challenge_len(), 13 + 18);
    assert_eq!(
        m.input1
            .concat(&m.input2)
            .concat(&m.extra_inputs[0])
            .concat(&m.extra_inputs[1]),
        two.inputs(5)
    );
    cfg.layout = Layout::L19;
    cfg.stages = 1;
    let m = ordna_gen(cfg).unwrap().molecule(0);
    assert_eq!(
        (m.input1.len(), m.input2.len(), m.output.len()),
        (9, 10, 21)
    );
    assert!(ordna_gen(OrdnaConfig::new(1, 999)).is_err());
    cfg.stages = 4;
    assert!(ordna_gen(cfg).is_err());
}

fn quiet() -> OrdnaEval {
    OrdnaEval {
        noise: NoiseModel::NONE,
        ..Default::default()
    }
}

#[test]
fn exact_challenge_reads_its_molecule() {
    let p = pool(3, 1000);
    let mut rng = SimRng::seed_from_u64(1);
    let reads = select_pcr(&p, &p.inputs(17), &quiet(), &mut rng).unwrap();
    assert_eq!(reads.len(), 32);
    assert!(reads.iter().all(|r| *r == p.output(17)));
}

#[test]
fn fresh_challenges_on_a_small_pool_amplify_nothing() {
    let p = pool(4, 1000);
    let mut rng = SimRng::seed_from_u64(2);
    for _ in 0..100 {
        let x = p.random_challenge(&mut rng);
        assert_eq!(
            select_pcr(&p, &x, &quiet(), &mut rng),
            Err(CfError::EmptyResponse)
        );
    }
    let wrong = Seq::from_bits(0, 12);
    assert!(matches!(
        select_pcr(&p, &wrong, &quiet(), &mut rng),
        Err(CfError::InvalidChallenge(_))
    ));
}

#[test]
fn read_noise_substitutes_bases() {
    let p = pool(5, 1000);
    let mut rng = SimRng::seed_from_u64(3);
    let params = OrdnaEval {
        reads: 2000,
        noise: NoiseModel {
            read_substitution: 0.05,
            sketch_byte_error: 0.0,
        },
        ..Default::default()
    };
    let reads = select_pcr(&p, &p.inputs(0), &params, &mut rng).unwrap();
    let clean = p.output(0);
    let diffs: u32 = reads.iter().map(|r| r.hamming(&clean)).sum();
    let rate = diffs as f64 / (2000.0 * 21.0);
    assert!((rate - 0.05).abs() < 0.005, "{rate}");
}

#[test]
fn cross_priming_correlates_neighbouring_challenges() {
    let p = pool(6, 100_000);
    let ex = OrdnaExtract::default();
    let params = OrdnaEval {
        cross: CrossPriming {
            kappa: 1,
            attenuation: 0.1,
        },
        ..quiet()
    };
    let mut rng = SimRng::seed_from_u64(4);
    let (mut near, mut far) = (0usize, 0usize);
    let trials = 10;
    for t in 0..trials {
        let x = p.inputs(t * 7);
        let x1 = x.with_base(3, (x.base(3) + 1) & 3);
        let other = p.inputs(t * 7 + 1);
        let sk = |c: &Seq, rng: &mut SimRng| {
            ex.clean_sketch(&select_pcr(&p, c, &params, rng).unwrap())
                .unwrap()
        };
        let a = sk(&x, &mut rng);
        near += a.distance(&sk(&x1, &mut rng));
        far += a.distance(&sk(&other, &mut rng));
    }
    assert!(near < far, "near {near} far {far}");
}

#[test]
fn kmer_counting() {
    let one = kmer_profile(&["AAAAAAAA".parse().unwrap()], 8);
    assert_eq!(one.counts, vec![(0, 1)]);
    let read: Seq = "ACGTACGTACGTACGTACGTA".parse().unwrap();
    let prof = kmer_profile(&[read], 8);
    assert_eq!(prof.total(), 21 - 8 + 1);
    assert_eq!(prof.support(), 4);
    let short = kmer_profile(&["ACG".parse().unwrap()], 8);
    assert!(short.is_empty());
    assert_eq!(short.skipped, 1);
    // "CCCCCCCG": index reads the first base as most significant
    let p = kmer_profile(&["CCCCCCCG".parse().unwrap()], 8);
    assert_eq!(p.counts[0].0, 0x5556);
}

#[test]
fn default_support_stays_below_200() {
    let p = pool(9, 100_000);
    let mut rng = SimRng::seed_from_u64(5);
    let params = OrdnaEval {
        noise: NoiseModel {
            read_substitution: 0.01,
            sketch_byte_error: 0.17,
        },
        ..Default::default()
    };
    for _ in 0..20 {
        let x = p.sample_challenge(&mut rng);
        let reads = select_pcr(&p, &x, &params, &mut rng).unwrap();
        assert!(kmer_profile(&reads, 8).support() < 200);
    }
}

#[test]
fn identical_profiles_sketch_identically() {
    let prof = KmerProfile::from_counts(8, [(1, 3), (99, 1), (40_000, 7)]);
    let a = minhash_sketch(&prof, 42, 30).unwrap();
    let b = minhash_sketch(&prof.clone(), 42, 30).unwrap();
    assert_eq!(a.distance(&b), 0);
    assert_eq!(a.as_bytes().len(), 30 * 255);
    assert!(minhash_sketch(&KmerProfile::default(), 1, 30).is_err());
}

#[test]
fn winner_collisions_track_weighted_jaccard() {
    let a = KmerProfile::from_counts(8, [(1, 5), (2, 3), (3, 1)]);
    let b = KmerProfile::from_counts(8, [(1, 2), (2, 3), (4, 4)]);
    let j = weighted_jaccard(&a, &b);
    assert!((j - 5.0 / 13.0).abs() < 1e-15);
    let per_seed = 7650;
    let mut hits = 0.0;
    for seed in 0..8 {
        let sa = minhash_signature(&a, seed, per_seed).unwrap();
        let sb = minhash_signature(&b, seed, per_seed).unwrap();
        hits += sa.iter().zip(&sb).filter(|(x, y)| x == y).count() as f64;
    }
    let n = 8 * per_seed;
    let sigma = (j * (1.0 - j) / n as f64).sqrt();
    assert!((hits / n as f64 - j).abs() < 3.0 * sigma);
}

#[test]
fn weighted_min_is_consistent_in_multiplicity() {
    // raising a multiplicity can only lower the minimum
    for kmer in 0..200u32 {
        let key = crate::rng::hash2(5, kmer as u64);
        let mut prev = (f64::INFINITY, 0);
        for w in 1..60 {
            let a = KmerProfile::from_counts(8, [(kmer, w)]);
            let s = minhash_signature(&a, key, 1).unwrap()[0];
            assert!(s.1 <= w);
            if s.1 != prev.1 {
                assert!(s.1 > prev.1 || prev.1 == 0);
            }
            prev = (0.0, s.1);
        }
    }
}

#[test]
fn disjoint_profiles_hit_the_digest_floor() {
    let a = KmerProfile::from_counts(8, (0..50).map(|i| (i, 2)));
    let b = KmerProfile::from_counts(8, (100..150).map(|i| (i, 2)));
    let sa = minhash_sketch(&a, 3, 30).unwrap();
    let sb = minhash_sketch(&b, 3, 30).unwrap();
    let n = 7650.0;
    let rate = (n - sa.distance(&sb) as f64) / n;
    let floor = 1.0 / 256.0;
    assert!(
        rate <= floor + 3.0 * (floor * (1.0 - floor) / n).sqrt(),
        "{rate}"
    );
}

#[test]
fn vault_lock_unlock() {
    let rs = ReedSolomon::rs255();
    let mut rng = SimRng::seed_from_u64(6);
    let w: Vec<u8> = (0..255).map(|_| rng.random()).collect();
    let (h, z) = vault_lock(&rs, &w, &mut rng).unwrap();
    assert_eq!(vault_unlock(&rs, &h, &w).unwrap(), z);
    let idx = rand::seq::index::sample(&mut rng, 255, 112);
    let mut w2 = w.clone();
    for (n, i) in idx.iter().enumerate() {
        if n < 111 {
            w2[i] ^= rng.random_range(1..=255u8);
        }
    }
    assert_eq!(vault_unlock(&rs, &h, &w2).unwrap(), z);
    let last = idx.index(111);
    w2[last] ^= 1;
    assert!(vault_unlock(&rs, &h, &w2).is_err());
    assert!(vault_unlock(&rs, &h, &w[..254]).is_err());
}

#[test]
fn randomizing_435_percent_of_coordinates() {
    // uniform resampling leaves a byte unchanged with probability 1/256
    let rs = ReedSolomon::rs255();
    let mut rng = SimRng::seed_from_u64(7);
    let w: Vec<u8> = (0..255).map(|_| rng.random()).collect();
    let (h, z) = vault_lock(&rs, &w, &mut rng).unwrap();
    for _ in 0..50 {
        let mut w2 = w.clone();
        for b in w2.iter_mut() {
            if rng.random_bool(0.435) {
                *b = rng.random();
            }
        }
        let errors = w.iter().zip(&w2).filter(|(a, b)| a != b).count();
        let unlocked = vault_unlock(&rs, &h, &w2);
        assert_eq!(unlocked.is_ok(), errors <= 111, "{errors} errors");
        if let Ok(z2) = unlocked {
            assert_eq!(z2, z);
        }
    }
}

#[test]
fn byte_rate_solves_the_pairwise_equation() {
    let p = per_evaluation_byte_rate(0.17).unwrap();
    assert!((p - 0.088976).abs() < 1e-5, "{p}");
    assert!((2.0 * p - p * p * 256.0 / 255.0 - 0.17).abs() < 1e-14);
    assert_eq!(per_evaluation_byte_rate(0.0).unwrap(), 0.0);
    assert!(per_evaluation_byte_rate(0.999).is_err());
}

fn system(pair_rate: f64, seed: u64) -> Cfs<Ordna> {
    let p = pool(seed, 100_000);
    let params = OrdnaEval {
        noise: NoiseModel {
            read_substitution: 0.0,
            sketch_byte_error: pair_rate,
        },
        ..Default::default()
    };
    Cfs::new(
        ChemicalFunction::<Ordna>::new(p, params, seed ^ 0xabc),
        OrdnaExtract::default(),
    )
}

#[test]
fn zero_noise_reconstruction_is_exact() {
    let mut cfs = system(0.0, 21);
    let mut rng = SimRng::seed_from_u64(8);
    let x = cfs.cf().profile().sample_challenge(&mut rng);
    let (z, h) = cfs.setup(&x).unwrap();
    let sketch = OrdnaExtract::default()
        .sketch(&cfs.cf_mut().evaluate(&x).unwrap())
        .unwrap();
    let vaults = VaultSet {
        helpers: match &h {
            crate::HelperData::Blob { payload, .. } => payload.clone(),
            _ => unreachable!(),
        },
    };
    let runs: Vec<&[u8]> = (0..30).map(|i| sketch.run(i)).collect();
    let (z2, ratio) = vaults.unlock(&ReedSolomon::rs255(), &runs, 0.5).unwrap();
    assert_eq!((z2, ratio), (z.clone(), 1.0));
    assert_eq!(cfs.reconstruct(&x, &h).unwrap(), z);
}

#[test]
fn example_noise_reconstructs_and_heavy_noise_fails() {
    let mut cfs = system(0.17, 22);
    let mut rng = SimRng::seed_from_u64(9);
    for _ in 0..5 {
        let x = cfs.cf().profile().sample_challenge(&mut rng);
        let (z, h) = cfs.setup(&x).unwrap();
        for _ in 0..4 {
            assert_eq!(cfs.reconstruct(&x, &h).unwrap(), z);
        }
    }
    let mut noisy = system(0.6, 23);
    let x = noisy.cf().profile().sample_challenge(&mut rng);
    let (_, h) = noisy.setup(&x).unwrap();
    for _ in 0..5 {
        assert!(matches!(
            noisy.reconstruct(&x, &h),
            Err(CfError::ReconstructFailure(_))
        ));
    }
}

#[test]
fn pairwise_sketch_mismatch_matches_target() {
    let ex = OrdnaExtract::default();
    let p = pool(24, 100_000);
    let params = OrdnaEval::default();
    let mut rng = SimRng::seed_from_u64(10);
    let x = p.sample_challenge(&mut rng);
    let mut diff = 0usize;
    let trials = 20;
    for _ in 0..trials {
        let a = ex
            .sketch(&Ordna::evaluate(&p, &params, &x, &mut rng).unwrap())
            .unwrap();
        let b = ex
            .sketch(&Ordna::evaluate(&p, &params, &x, &mut rng).unwrap())
            .unwrap();
        diff += a.distance(&b);
    }
    let n = (trials * 7650) as f64;
    let rate = diff as f64 / n;
    assert!(
        (rate - 0.17).abs() < 3.0 * (0.17f64 * 0.83 / n).sqrt(),
        "{rate}"
    );
}

#[test]
fn filter_hook_discards_reads() {
    fn reject_all(_: &Seq) -> bool {
        true
    }
    let ex = OrdnaExtract {
        filter: Some(reject_all),
        ..Default::default()
    };
    let p = pool(25, 1000);
    let reads = vec![p.output(0); 4];
    assert_eq!(ex.clean_sketch(&reads), Err(CfError::EmptyResponse));
}

#[test]
fn challenge_encoding_is_canonical() {
    let p = pool(26, 1000);
    let x = p.inputs(3);
    let bytes = Ordna::encode_challenge(&x);
    assert_eq!(Ordna::decode_challenge(&bytes).unwrap(), x);
    let mut cfs = system(0.0, 26);
    assert!(matches!(
        cfs.setup_bytes(&[13, 1]),
        Err(CfError::InvalidChallenge(_))
    ));
}
