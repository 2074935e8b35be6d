//! Exhaustive check that the expected overlap of two permuted multinomial
//! profiles is Schur-concave.
//!
//! For a probability vector `p` over `m` categories, draw `X ~ Mult(s, p)`
//! and, for a uniformly random permutation `π`, `Y ~ Mult(s, p∘π)`
//! independently. `F(p) = E[Σ_i min(X_i, Y_i)]`. Probabilities are integer
//! weights over a common denominator `D`, so `F(p) · m! · D^{2s}` is an
//! integer and every comparison below is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::exactprob::{domain, ProbError};

pub const MAX_CATEGORIES: usize = 5;
pub const MAX_DRAWS: u32 = 4;

const OVERFLOW: ProbError = ProbError::Overflow("Schur enumeration");

/// A probability vector given as integer weights over `denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurInstance {
    weights: Vec<u64>,
    denom: u64,
    draws: u32,
}

impl SchurInstance {
    pub fn new(weights: Vec<u64>, denom: u64, draws: u32) -> Result<Self, ProbError> {
        let m = weights.len();
        if m == 0 || m > MAX_CATEGORIES {
            return Err(domain(alloc::format!(
                "{m} categories, expected 1..={MAX_CATEGORIES}"
            )));
        }
        if draws == 0 || draws > MAX_DRAWS {
            return Err(domain(alloc::format!(
                "{draws} draws, expected 1..={MAX_DRAWS}"
            )));
        }
        if denom == 0 || weights.iter().sum::<u64>() != denom {
            return Err(domain(alloc::format!(
                "weights do not sum to the denominator {denom}"
            )));
        }
        Ok(Self {
            weights,
            denom,
            draws,
        })
    }

    /// The uniform vector over `m` categories.
    pub fn uniform(m: usize, draws: u32) -> Result<Self, ProbError> {
        Self::new(vec![1; m], m as u64, draws)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn draws(&self) -> u32 {
        self.draws
    }

    pub fn categories(&self) -> usize {
        self.weights.len()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|&w| w as f64 / self.denom as f64)
            .collect()
    }

    /// The same vector over a denominator that is a multiple of `denom`.
    pub fn rescaled(&self, denom: u64) -> Result<Self, ProbError> {
        if denom % self.denom != 0 {
            return Err(domain(alloc::format!(
                "{denom} is not a multiple of {}",
                self.denom
            )));
        }
        let f = denom / self.denom;
        Self::new(
            self.weights.iter().map(|w| w * f).collect(),
            denom,
            self.draws,
        )
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            weights: perm.iter().map(|&i| self.weights[i]).collect(),
            denom: self.denom,
            draws: self.draws,
        }
    }
}

/// An exact nonnegative rational.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, ProbError> {
        let a = self.num.checked_mul(other.den).ok_or(OVERFLOW)?;
        let b = other.num.checked_mul(self.den).ok_or(OVERFLOW)?;
        Ok(a.cmp(&b))
    }
}

/// All count vectors of `s` draws into `m` categories.
fn compositions(m: usize, s: u32) -> Vec<Vec<u32>> {
    fn go(m: usize, s: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 1 {
            prefix.push(s);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=s {
            prefix.push(a);
            go(m - 1, s - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, s, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Heap's algorithm, iteratively.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..m).collect();
    let mut c = vec![0usize; m];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `D^s · P[X = x]` for every count vector `x`.
fn scaled_pmf(inst: &SchurInstance, counts: &[Vec<u32>]) -> Result<Vec<u128>, ProbError> {
    let s_fact = factorial(inst.draws);
    counts
        .iter()
        .map(|x| {
            let mut term = s_fact / x.iter().map(|&k| factorial(k)).product::<u128>();
            for (&w, &k) in inst.weights.iter().zip(x) {
                term = term
                    .checked_mul((w as u128).checked_pow(k).ok_or(OVERFLOW)?)
                    .ok_or(OVERFLOW)?;
            }
            Ok(term)
        })
        .collect()
}

/// `F(p)` by enumerating every permutation and every pair of count vectors.
pub fn schur_f(inst: &SchurInstance) -> Result<Ratio, ProbError> {
    let m = inst.categories();
    let counts = compositions(m, inst.draws);
    let px = scaled_pmf(inst, &counts)?;
    let overlap: Vec<Vec<u128>> = counts
        .iter()
        .map(|x| {
            counts
                .iter()
                .map(|y| x.iter().zip(y).map(|(a, b)| (*a).min(*b) as u128).sum())
                .collect()
        })
        .collect();
    let mut num: u128 = 0;
    for perm in permutations(m) {
        let py = scaled_pmf(&inst.permuted(&perm), &counts)?;
        for (i, &a) in px.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in py.iter().enumerate() {
                let w = overlap[i][j];
                if b == 0 || w == 0 {
                    continue;
                }
                let term = a
                    .checked_mul(b)
                    .and_then(|t| t.checked_mul(w))
                    .ok_or(OVERFLOW)?;
                num = num.checked_add(term).ok_or(OVERFLOW)?;
            }
        }
    }
    let d_pow = (inst.denom as u128)
        .checked_pow(2 * inst.draws)
        .ok_or(OVERFLOW)?;
    let den = d_pow.checked_mul(factorial(m as u32)).ok_or(OVERFLOW)?;
    Ok(Ratio { num, den })
}

/// Exact majorization on integer weights of equal denominator.
pub fn majorizes_exact(p: &[u64], q: &[u64]) -> bool {
    let sorted = |v: &[u64]| {
        let mut v = v.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let (ps, qs) = (sorted(p), sorted(q));
    let (mut a, mut b) = (0u64, 0u64);
    ps.iter().zip(&qs).all(|(x, y)| {
        a += x;
        b += y;
        a >= b
    })
}

/// Result of [`schur_check`] over one simplex grid.
#[derive(Clone, Debug)]
pub struct SchurReport {
    pub categories: usize,
    pub draws: u32,
    /// Grid step is `1 / grid`.
    pub grid: u64,
    pub points: usize,
    pub symmetry_checks: usize,
    pub symmetry_violations: usize,
    pub majorizing_pairs: usize,
    pub majorization_violations: usize,
    pub uniform_value: Ratio,
    pub grid_max: Ratio,
    pub grid_argmax: Vec<u64>,
    pub uniform_is_max: bool,
}

impl SchurReport {
    pub fn passed(&self) -> bool {
        self.symmetry_violations == 0 && self.majorization_violations == 0 && self.uniform_is_max
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks symmetry under every permutation, monotonicity along every
/// majorizing pair of grid points, and that the uniform vector is at least
/// the grid maximum, for the simplex grid of step `1 / grid`.
pub fn schur_check(categories: usize, draws: u32, grid: u64) -> Result<SchurReport, ProbError> {
    if grid == 0 {
        return Err(domain("grid resolution must be positive"));
    }
    SchurInstance::uniform(categories, draws)?;
    // a common denominator holds both the grid and the uniform vector
    let denom = grid / gcd(grid, categories as u64) * categories as u64;
    let scale = denom / grid;
    let points: Vec<SchurInstance> = compositions(categories, grid as u32)
        .into_iter()
        .map(|c| SchurInstance::new(c.iter().map(|&w| w as u64 * scale).collect(), denom, draws))
        .collect::<Result<_, _>>()?;
    let values: Vec<Ratio> = points.iter().map(schur_f).collect::<Result<_, _>>()?;

    let perms = permutations(categories);
    let (mut symmetry_checks, mut symmetry_violations) = (0, 0);
    for (inst, f) in points.iter().zip(&values) {
        let mut seen: Vec<Vec<u64>> = Vec::new();
        for perm in &perms {
            let moved = inst.permuted(perm);
            if moved.weights == inst.weights || seen.contains(&moved.weights) {
                continue;
            }
            symmetry_checks += 1;
            if schur_f(&moved)?.num != f.num {
                symmetry_violations += 1;
            }
            seen.push(moved.weights);
        }
    }

    let (mut majorizing_pairs, mut majorization_violations) = (0, 0);
    for (p, fp) in points.iter().zip(&values) {
        for (q, fq) in points.iter().zip(&values) {
            if p.weights != q.weights && majorizes_exact(&p.weights, &q.weights) {
                majorizing_pairs += 1;
                if fp.num > fq.num {
                    majorization_violations += 1;
                }
            }
        }
    }

    let uniform_value = schur_f(&SchurInstance::uniform(categories, draws)?.rescaled(denom)?)?;
    let (arg, grid_max) = values
        .iter()
        .enumerate()
        .max_by_key(|(_, v)| v.num)
        .map(|(i, v)| (i, *v))
        .ok_or_else(|| domain("empty grid"))?;
    Ok(SchurReport {
        categories,
        draws,
        grid,
        points: points.len(),
        symmetry_checks,
        symmetry_violations,
        majorizing_pairs,
        majorization_violations,
        uniform_is_max: uniform_value.num >= grid_max.num,
        uniform_value,
        grid_max,
        grid_argmax: points[arg].weights.clone(),
    })
}
