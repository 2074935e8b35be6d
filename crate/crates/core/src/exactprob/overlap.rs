//! Support-overlap law of two random `s`-subsets and majorization.

use alloc::vec;
use alloc::vec::Vec;

use super::{domain, ln_choose, ProbError};

/// Which collision-count law to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OverlapLaw {
    /// `C(s, j) C(N − s, s − j) / C(N, s)`; sums to one.
    #[default]
    Hypergeometric,
    /// `C(s, j) C(N − s − j, s − j) / C(N, s)`, as sometimes written; its
    /// mass falls slightly short of one.
    Literal,
}

/// `P[overlap = j]` for `j = 0..=s`.
pub fn overlap_pmf(universe: u64, support: u64, law: OverlapLaw) -> Result<Vec<f64>, ProbError> {
    let (n, s) = (universe, support);
    if s > n {
        return Err(domain(alloc::format!("support {s} exceeds universe {n}")));
    }
    if s == 0 {
        return Ok(vec![1.0]);
    }
    match law {
        OverlapLaw::Hypergeometric => Ok(hypergeometric(n, s)),
        OverlapLaw::Literal => {
            let denom = ln_choose(n, s);
            Ok((0..=s)
                .map(|j| {
                    let rest = n.checked_sub(s + j);
                    match rest {
                        Some(r) => libm::exp(ln_choose(s, j) + ln_choose(r, s - j) - denom),
                        None => 0.0,
                    }
                })
                .collect())
        }
    }
}

/// Ratio recurrence
/// `P(j+1)/P(j) = (s − j)² / ((j + 1)(N − 2s + j + 1))`, normalized at the
/// end; avoids cancellation in log-gamma at large `N`.
fn hypergeometric(n: u64, s: u64) -> Vec<f64> {
    let j_min = (2 * s).saturating_sub(n);
    let mut ln_w = vec![f64::NEG_INFINITY; s as usize + 1];
    ln_w[j_min as usize] = 0.0;
    for j in j_min..s {
        let num = ((s - j) * (s - j)) as f64;
        let den = ((j + 1) as f64) * ((n + j + 1 - 2 * s) as f64);
        ln_w[j as usize + 1] = ln_w[j as usize] + libm::log(num / den);
    }
    let max = ln_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = ln_w.iter().map(|&l| libm::exp(l - max)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// `(1/s) Σ j P[overlap = j]`: the expected fraction of one support hit by
/// the other.
pub fn overlap_pe_bound(universe: u64, support: u64) -> Result<f64, ProbError> {
    overlap_pe_bound_with(universe, support, OverlapLaw::Hypergeometric)
}

pub fn overlap_pe_bound_with(
    universe: u64,
    support: u64,
    law: OverlapLaw,
) -> Result<f64, ProbError> {
    if support == 0 {
        return Err(domain("support must be positive"));
    }
    let pmf = overlap_pmf(universe, support, law)?;
    let mean: f64 = pmf.iter().enumerate().map(|(j, &p)| j as f64 * p).sum();
    Ok(mean / support as f64)
}

const NORM_TOL: f64 = 1e-9;

/// Whether `p` majorizes `q`: every prefix sum of `p` sorted descending is at
/// least the matching prefix sum of `q`.
pub fn majorizes(p: &[f64], q: &[f64]) -> Result<bool, ProbError> {
    if p.len() != q.len() {
        return Err(ProbError::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    for v in [p, q] {
        let sum: f64 = v.iter().sum();
        if libm::fabs(sum - 1.0) > NORM_TOL || v.iter().any(|&x| x < 0.0) {
            return Err(ProbError::NotNormalized { sum });
        }
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
        v
    };
    let (ps, qs) = (sorted(p), sorted(q));
    let (mut a, mut b) = (0.0, 0.0);
    for (x, y) in ps.iter().zip(&qs) {
        a += x;
        b += y;
        if a < b - NORM_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
