//! Hamming-ball volumes and the unpredictability bound built on them.

use super::{ln_choose, ln_sum, LogProb, ProbError};
use alloc::vec::Vec;

/// `Φ(ℓ, κ) = Σ_{j ≤ κ} C(ℓ, j) (a − 1)^j`, exactly.
pub fn hamming_ball_volume(ell: u32, kappa: u32, alphabet: u32) -> Result<u128, ProbError> {
    if kappa > ell {
        return Err(super::domain(alloc::format!(
            "radius {kappa} exceeds length {ell}"
        )));
    }
    if alphabet < 2 {
        return Err(super::domain("alphabet needs at least two symbols"));
    }
    const OVERFLOW: ProbError = ProbError::Overflow("Hamming-ball volume");
    let base = (alphabet - 1) as u128;
    let mut choose: u128 = 1;
    let mut power: u128 = 1;
    let mut total: u128 = 1;
    for j in 1..=kappa as u128 {
        // C(ℓ, j) = C(ℓ, j-1) (ℓ - j + 1) / j, exact at every step
        choose = choose.checked_mul(ell as u128 - j + 1).ok_or(OVERFLOW)? / j;
        power = power.checked_mul(base).ok_or(OVERFLOW)?;
        let term = choose.checked_mul(power).ok_or(OVERFLOW)?;
        total = total.checked_add(term).ok_or(OVERFLOW)?;
    }
    Ok(total)
}

/// `log10 Φ(ℓ, κ)` for volumes beyond 128 bits.
pub fn hamming_ball_log10(ell: u32, kappa: u32, alphabet: u32) -> Result<f64, ProbError> {
    if let Ok(v) = hamming_ball_volume(ell, kappa, alphabet) {
        return Ok(libm::log10(v as f64));
    }
    if kappa > ell || alphabet < 2 {
        return Err(super::domain("invalid Hamming-ball parameters"));
    }
    let la = libm::log((alphabet - 1) as f64);
    let mut terms: Vec<f64> = (0..=kappa as u64)
        .map(|j| ln_choose(ell as u64, j) + j as f64 * la)
        .collect();
    Ok(ln_sum(&mut terms) / core::f64::consts::LN_10)
}

/// `min(1, (1 + q Φ(ℓ, κ)) / 4^ℓ)`: a per-challenge guessing bound for a
/// response of `ℓ` nucleotides after `q` queries with κ-neighbourhood leak.
pub fn sigma_bound(ell: u32, kappa: u32, q: u128) -> Result<LogProb, ProbError> {
    let ln_phi = hamming_ball_log10(ell, kappa, 4)? * core::f64::consts::LN_10;
    let ln_q_phi = if q == 0 {
        f64::NEG_INFINITY
    } else {
        libm::log(q as f64) + ln_phi
    };
    let ln_num = super::ln_add(0.0, ln_q_phi);
    let ln = ln_num - ell as f64 * libm::log(4.0);
    Ok(LogProb::from_ln(ln).clamp_one())
}
