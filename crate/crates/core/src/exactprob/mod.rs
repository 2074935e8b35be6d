//! Log-space probability kernels.
//!
//! Binomial tails are summed in the natural-log domain with compensated
//! summation, so values far below `f64::MIN_POSITIVE` (e.g. `1e-280`) keep
//! their exponent and leading digits.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

mod ball;
mod ml;
mod overlap;

pub use ball::{hamming_ball_log10, hamming_ball_volume, sigma_bound};
pub use ml::{
    clone_success_gse, decision_boundary, ml_p_err, p_detect, GseRates, MlDecision, TieRule,
};
pub use overlap::{majorizes, overlap_pe_bound, overlap_pe_bound_with, overlap_pmf, OverlapLaw};

const LN_10: f64 = core::f64::consts::LN_10;

#[derive(Clone, Debug, PartialEq)]
pub enum ProbError {
    /// An argument lies outside the domain of the function.
    Domain(String),
    /// An exact integer result does not fit in 128 bits.
    Overflow(&'static str),
    LengthMismatch {
        left: usize,
        right: usize,
    },
    NotNormalized {
        sum: f64,
    },
}

impl fmt::Display for ProbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Domain(msg) => write!(f, "domain error: {msg}"),
            Self::Overflow(what) => write!(f, "{what} overflows u128"),
            Self::LengthMismatch { left, right } => {
                write!(f, "vector lengths differ ({left} vs {right})")
            }
            Self::NotNormalized { sum } => write!(f, "vector sums to {sum}, not 1"),
        }
    }
}

impl core::error::Error for ProbError {}

pub(crate) fn domain(msg: impl Into<String>) -> ProbError {
    ProbError::Domain(msg.into())
}

/// A probability (or bound) carried as its base-10 logarithm.
#[derive(Clone, Copy, Debug)]
pub struct LogProb {
    log10: f64,
    exact_zero: bool,
}

impl LogProb {
    pub const ONE: Self = Self {
        log10: 0.0,
        exact_zero: false,
    };
    pub const ZERO: Self = Self {
        log10: f64::NEG_INFINITY,
        exact_zero: true,
    };

    pub fn from_log10(log10: f64) -> Self {
        if log10 == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                log10,
                exact_zero: false,
            }
        }
    }

    pub fn from_ln(ln: f64) -> Self {
        Self::from_log10(ln / LN_10)
    }

    pub fn from_prob(p: f64) -> Self {
        if p <= 0.0 {
            Self::ZERO
        } else {
            Self::from_log10(libm::log10(p))
        }
    }

    pub fn log10(self) -> f64 {
        self.log10
    }

    pub fn ln(self) -> f64 {
        self.log10 * LN_10
    }

    pub fn is_exact_zero(self) -> bool {
        self.exact_zero
    }

    /// The linear value; underflows to 0 below ~1e-308.
    pub fn value(self) -> f64 {
        if self.exact_zero {
            0.0
        } else {
            libm::exp(self.ln())
        }
    }

    /// `min(self, 1)`.
    pub fn clamp_one(self) -> Self {
        if self.log10 > 0.0 {
            Self::ONE
        } else {
            self
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.exact_zero || other.exact_zero {
            Self::ZERO
        } else {
            Self::from_log10(self.log10 + other.log10)
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self::from_ln(ln_add(self.ln(), other.ln()))
    }

    /// `1 - self`, accurate at both ends of the range.
    pub fn complement(self) -> Self {
        if self.exact_zero {
            return Self::ONE;
        }
        let ln = self.ln();
        if ln >= 0.0 {
            return Self::ZERO;
        }
        if ln < -core::f64::consts::LN_2 {
            Self::from_ln(libm::log1p(-libm::exp(ln)))
        } else {
            Self::from_ln(libm::log(-libm::expm1(ln)))
        }
    }

    /// Mantissa in `[1, 10)` and decimal exponent.
    pub fn scientific(self) -> (f64, i32) {
        if self.exact_zero {
            return (0.0, 0);
        }
        let e = libm::floor(self.log10);
        (libm::pow(10.0, self.log10 - e), e as i32)
    }
}

impl PartialEq for LogProb {
    fn eq(&self, other: &Self) -> bool {
        self.log10 == other.log10
    }
}

impl PartialOrd for LogProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log10.partial_cmp(&other.log10)
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return f.write_str("0");
        }
        let (m, e) = self.scientific();
        let digits = f.precision().unwrap_or(3);
        write!(f, "{m:.digits$}e{e}")
    }
}

/// `ln(e^a + e^b)`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `ln Σ e^x` over `terms`, summing from the smallest term with Neumaier
/// compensation.
pub fn ln_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let max = match terms.last() {
        Some(&m) if m > f64::NEG_INFINITY => m,
        _ => return f64::NEG_INFINITY,
    };
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &t in terms.iter() {
        let x = libm::exp(t - max);
        let s = sum + x;
        if libm::fabs(sum) >= libm::fabs(x) {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    max + libm::log(sum + comp)
}

/// `ln C(n, k)`; exact below n = 125, log-gamma above.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if n <= 124 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return libm::log(c as f64);
    }
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `ln n! − ln(√(2πn) (n/e)^n)`.
fn stirlerr(n: u64) -> f64 {
    const TABLE: [f64; 16] = [
        0.0,
        0.081_061_466_795_327_258,
        0.041_340_695_955_409_294,
        0.027_677_925_684_998_339,
        0.020_790_672_103_765_093,
        0.016_644_691_189_821_192,
        0.013_876_128_823_070_748,
        0.011_896_709_945_891_770,
        0.010_411_265_261_972_096,
        0.009_255_462_182_712_733,
        0.008_330_563_433_362_871,
        0.007_573_675_487_951_841,
        0.006_942_840_107_209_530,
        0.006_408_994_188_004_207,
        0.005_951_370_112_758_848,
        0.005_554_733_551_962_801,
    ];
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15 {
        return TABLE[n as usize];
    }
    let x = n as f64;
    let nn = x * x;
    if n > 500 {
        (S0 - S1 / nn) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / x
    }
}

/// `x ln(x/m) + m − x`, without cancellation when `x ≈ m`.
fn bd0(x: f64, m: f64) -> f64 {
    if libm::fabs(x - m) < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * libm::log(x / m) + m - x
    }
}

/// Terms further than this below the running maximum (natural log) are
/// dropped from tail sums: `e^-80 ≈ 1.8e-35` relative.
const TAIL_CUTOFF: f64 = 80.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialSpec {
    pub n: u64,
    pub p: f64,
}

impl BinomialSpec {
    pub fn new(n: u64, p: f64) -> Result<Self, ProbError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(alloc::format!(
                "success probability {p} outside [0, 1]"
            )));
        }
        Ok(Self { n, p })
    }

    /// `ln P[X = k]`, via the saddle-point form
    /// `stirlerr` / `bd0` (Loader 2000), accurate to ~1e-15 relative.
    pub fn ln_pmf(&self, k: u64) -> f64 {
        let Self { n, p } = *self;
        if k > n {
            return f64::NEG_INFINITY;
        }
        if p == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        if p == 1.0 {
            return if k == n { 0.0 } else { f64::NEG_INFINITY };
        }
        let nf = n as f64;
        if k == 0 {
            return nf * libm::log1p(-p);
        }
        if k == n {
            return nf * libm::log(p);
        }
        let (x, q) = (k as f64, 1.0 - p);
        let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(x, nf * p) - bd0(nf - x, nf * q);
        let lf = LN_2PI + libm::log(x) + libm::log1p(-x / nf);
        lc - 0.5 * lf
    }

    pub fn pmf(&self, k: u64) -> LogProb {
        LogProb::from_ln(self.ln_pmf(k))
    }

    /// `ln P[lo ≤ X ≤ hi]`. Ranges holding the mode are computed as one
    /// minus the excluded tails, which keeps `1 − 1e-23` distinguishable.
    fn ln_range(&self, lo: u64, hi: u64) -> f64 {
        if lo > hi {
            return f64::NEG_INFINITY;
        }
        if lo == 0 && hi == self.n {
            return 0.0;
        }
        let mode = self.mode();
        if lo <= mode && mode <= hi {
            let below = if lo > 0 {
                self.ln_tail_sum(0, lo - 1)
            } else {
                f64::NEG_INFINITY
            };
            let above = if hi < self.n {
                self.ln_tail_sum(hi + 1, self.n)
            } else {
                f64::NEG_INFINITY
            };
            let excluded = ln_add(below, above);
            if excluded < -core::f64::consts::LN_2 {
                return libm::log1p(-libm::exp(excluded));
            }
        }
        self.ln_tail_sum(lo, hi)
    }

    fn mode(&self) -> u64 {
        (libm::floor((self.n as f64 + 1.0) * self.p) as u64).min(self.n)
    }

    /// Direct sum, walking outward from the point of `[lo, hi]` nearest the
    /// mode until terms fall below the cutoff.
    fn ln_tail_sum(&self, lo: u64, hi: u64) -> f64 {
        let start = self.mode().clamp(lo, hi);
        let mut terms = Vec::new();
        let first = self.ln_pmf(start);
        terms.push(first);
        let mut best = first;
        let mut k = start;
        while k > lo {
            k -= 1;
            let t = self.ln_pmf(k);
            if t < best - TAIL_CUTOFF {
                break;
            }
            best = best.max(t);
            terms.push(t);
        }
        let mut k = start;
        while k < hi {
            k += 1;
            let t = self.ln_pmf(k);
            if t < best - TAIL_CUTOFF {
                break;
            }
            best = best.max(t);
            terms.push(t);
        }
        ln_sum(&mut terms).min(0.0)
    }

    /// `P[X ≤ t]`.
    pub fn cdf(&self, t: u64) -> Result<LogProb, ProbError> {
        if t > self.n {
            return Err(domain(alloc::format!(
                "cdf argument {t} outside 0..={}",
                self.n
            )));
        }
        Ok(LogProb::from_ln(self.ln_range(0, t)))
    }

    /// `P[X ≥ from]`.
    pub fn sf(&self, from: u64) -> Result<LogProb, ProbError> {
        if from > self.n {
            return Err(domain(alloc::format!(
                "tail start {from} outside 0..={}",
                self.n
            )));
        }
        Ok(LogProb::from_ln(self.ln_range(from, self.n)))
    }
}

pub fn binom_cdf(spec: BinomialSpec, t: u64) -> Result<LogProb, ProbError> {
    spec.cdf(t)
}

pub fn binom_sf(spec: BinomialSpec, from: u64) -> Result<LogProb, ProbError> {
    spec.sf(from)
}
