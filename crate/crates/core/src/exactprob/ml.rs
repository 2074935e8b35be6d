//! Maximum-likelihood key-site detection from noisy edit reads.
//!
//! At a key-site a read reports an edit with probability
//! `p_detect = p_edit (1 − p_seq_err) + (1 − p_edit) p_seq_err`; elsewhere
//! with probability `p_seq_err`. With equal priors the likelihood ratio of
//! `ℓ` edit reads out of `q` crosses one at `ℓ / q = b`, the decision
//! boundary, and `ℓ* = ⌊q b⌋`.

use super::{domain, BinomialSpec, LogProb, ProbError};

/// Per-read rates of the GSE measurement model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GseRates {
    pub p_seq_err: f64,
    pub p_edit: f64,
}

impl GseRates {
    pub fn p_detect(&self) -> f64 {
        p_detect(self.p_seq_err, self.p_edit)
    }
}

pub fn p_detect(p_seq_err: f64, p_edit: f64) -> f64 {
    p_edit * (1.0 - p_seq_err) + (1.0 - p_edit) * p_seq_err
}

fn check_rates(p_seq_err: f64, p_edit: f64) -> Result<(), ProbError> {
    if !(0.0..0.5).contains(&p_seq_err) {
        return Err(domain(alloc::format!(
            "sequencing error rate {p_seq_err} outside [0, 0.5)"
        )));
    }
    if !(p_edit > 0.0 && p_edit <= 1.0) {
        return Err(domain(alloc::format!("edit rate {p_edit} outside (0, 1]")));
    }
    Ok(())
}

/// The threshold on `ℓ / q` where the likelihood ratio equals one.
pub fn decision_boundary(p_seq_err: f64, p_edit: f64) -> Result<f64, ProbError> {
    check_rates(p_seq_err, p_edit)?;
    if p_seq_err == 0.0 {
        return Err(domain(
            "sequencing error rate 0 makes the log-likelihood singular",
        ));
    }
    let pd = p_detect(p_seq_err, p_edit);
    if pd >= 1.0 {
        return Err(domain(
            "detection probability 1 makes the log-likelihood singular",
        ));
    }
    let (l1s, l1d) = (libm::log1p(-p_seq_err), libm::log1p(-pd));
    let num = l1s - l1d;
    let den = libm::log(pd) - l1d - libm::log(p_seq_err) + l1s;
    Ok(num / den)
}

/// How a likelihood ratio of exactly one is decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieRule {
    #[default]
    NotKeySite,
    KeySite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlDecision {
    pub p_edit: f64,
    pub p_seq_err: f64,
    pub p_detect: f64,
    pub q: u64,
    /// Decide "key-site" iff the edit count exceeds this.
    pub ell_star: u64,
}

impl MlDecision {
    /// With `p_seq_err = 0` a single edit read is conclusive, so `ℓ* = 0`.
    pub fn new(q: u64, p_seq_err: f64, p_edit: f64, tie: TieRule) -> Result<Self, ProbError> {
        check_rates(p_seq_err, p_edit)?;
        let pd = p_detect(p_seq_err, p_edit);
        let ell_star = if p_seq_err == 0.0 {
            0
        } else {
            let x = q as f64 * decision_boundary(p_seq_err, p_edit)?;
            let fl = libm::floor(x);
            if tie == TieRule::KeySite && fl == x && fl >= 1.0 {
                fl as u64 - 1
            } else {
                fl as u64
            }
        };
        Ok(Self {
            p_edit,
            p_seq_err,
            p_detect: pd,
            q,
            ell_star: ell_star.min(q),
        })
    }

    pub fn rates(&self) -> GseRates {
        GseRates {
            p_seq_err: self.p_seq_err,
            p_edit: self.p_edit,
        }
    }

    pub fn is_key_site(&self, edit_reads: u64) -> bool {
        edit_reads > self.ell_star
    }

    /// `P[decide not key-site | key-site]`.
    pub fn miss(&self) -> f64 {
        BinomialSpec {
            n: self.q,
            p: self.p_detect,
        }
        .cdf(self.ell_star)
        .map_or(1.0, LogProb::value)
    }

    /// `P[decide key-site | not key-site]`.
    pub fn false_alarm(&self) -> f64 {
        if self.ell_star >= self.q {
            return 0.0;
        }
        BinomialSpec {
            n: self.q,
            p: self.p_seq_err,
        }
        .sf(self.ell_star + 1)
        .map_or(0.0, LogProb::value)
    }

    /// Error probability with equal priors.
    pub fn p_err(&self) -> f64 {
        0.5 * (self.miss() + self.false_alarm())
    }
}

/// Per-position error of the ML decision after `q` reads.
pub fn ml_p_err(q: u64, p_seq_err: f64, p_edit: f64) -> Result<f64, ProbError> {
    decision_boundary(p_seq_err, p_edit)?;
    Ok(MlDecision::new(q, p_seq_err, p_edit, TieRule::NotKeySite)?.p_err())
}

/// `BinCDF(t; n_chal, p_err p_detect + (1 − p_err)(1 − p_detect))`.
pub fn clone_success_gse(
    t: u64,
    n_chal: u64,
    q: u64,
    rates: GseRates,
) -> Result<LogProb, ProbError> {
    if t > n_chal {
        return Err(domain(alloc::format!(
            "t = {t} exceeds challenge length {n_chal}"
        )));
    }
    let pe = ml_p_err(q, rates.p_seq_err, rates.p_edit)?;
    let pd = rates.p_detect();
    let param = pe * pd + (1.0 - pe) * (1.0 - pd);
    BinomialSpec::new(n_chal, param.clamp(0.0, 1.0))?.cdf(t)
}
