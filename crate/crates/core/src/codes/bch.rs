//! Narrow-sense binary BCH codes of length `n = 2^m - 1`.
//!
//! Codewords are bit vectors (`u8` values 0/1) with `word[i]` the
//! coefficient of `x^i`. Encoding is systematic: parity occupies
//! `word[..n-k]` and the message `word[n-k..]`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::gf2m::BinaryField;
use super::{check_len, CodeFamily, CodeSpec, CodecError, DecodeOutcome};

#[derive(Clone, Debug)]
pub struct Bch {
    spec: CodeSpec,
    field: BinaryField,
    /// Generator bits, lowest degree first.
    generator: Vec<u8>,
}

/// Generator of the narrow-sense BCH code with roots `α^1..α^(2t)`.
fn generator_for(field: &BinaryField, t: usize) -> Vec<u8> {
    let mut covered = BTreeSet::new();
    let mut g = vec![1u8];
    for i in 1..=2 * t {
        let i = i % field.order();
        if covered.contains(&i) {
            continue;
        }
        for e in field.coset(i) {
            covered.insert(e);
        }
        g = poly_mul_gf2(&g, &field.minimal_polynomial(i));
    }
    g
}

fn poly_mul_gf2(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// `(t, k)` for every distinct generator at length `2^m - 1`, where `t` is
/// the largest designed capability that yields that generator.
fn candidates(field: &BinaryField) -> Vec<(usize, usize, Vec<u8>)> {
    let n = field.order();
    let mut out: Vec<(usize, usize, Vec<u8>)> = Vec::new();
    for t in 1..=(n - 1) / 2 {
        let g = generator_for(field, t);
        let k = n - (g.len() - 1);
        match out.last_mut() {
            Some(last) if last.2 == g => last.0 = t,
            _ => out.push((t, k, g)),
        }
    }
    out
}

/// Builds the binary BCH code of length `n_bits` with correction capability
/// at least `t_target` and the largest dimension among the candidates.
pub fn bch_make(n_bits: usize, t_target: usize) -> Result<Bch, CodecError> {
    let m = (3..=10u32)
        .find(|&m| (1usize << m) - 1 == n_bits)
        .ok_or_else(|| {
            CodecError::Parameter(alloc::format!(
                "length {n_bits} is not 2^m - 1 with 3 <= m <= 10"
            ))
        })?;
    let field = BinaryField::new(m)?;
    let cands = candidates(&field);
    let chosen = cands
        .iter()
        .filter(|(t, _, _)| *t >= t_target && t_target >= 1)
        .max_by_key(|(_, k, _)| *k);
    match chosen {
        Some((t, k, g)) => Ok(Bch {
            spec: CodeSpec {
                family: CodeFamily::Bch,
                n: n_bits,
                k: *k,
                d: 2 * t + 1,
                t: *t,
            },
            field,
            generator: g.clone(),
        }),
        None => Err(CodecError::Infeasible {
            n: n_bits,
            t: t_target,
            achievable: cands.iter().map(|c| c.0).collect(),
        }),
    }
}

/// Distinct correction capabilities available at length `n_bits`, with the
/// dimension of each.
pub fn bch_table(n_bits: usize) -> Result<Vec<(usize, usize)>, CodecError> {
    let m = (3..=10u32)
        .find(|&m| (1usize << m) - 1 == n_bits)
        .ok_or_else(|| {
            CodecError::Parameter(alloc::format!(
                "length {n_bits} is not 2^m - 1 with 3 <= m <= 10"
            ))
        })?;
    let field = BinaryField::new(m)?;
    Ok(candidates(&field)
        .into_iter()
        .map(|(t, k, _)| (t, k))
        .collect())
}

fn check_bits(bits: &[u8]) -> Result<(), CodecError> {
    match bits.iter().position(|&b| b > 1) {
        Some(index) => Err(CodecError::Symbol {
            index,
            value: bits[index],
        }),
        None => Ok(()),
    }
}

impl Bch {
    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>, CodecError> {
        let CodeSpec { n, k, .. } = self.spec;
        check_len(k, message.len())?;
        check_bits(message)?;
        let r = n - k;
        let mut word = vec![0u8; n];
        word[r..].copy_from_slice(message);
        // remainder of m(x) x^r modulo g(x)
        let mut rem = word.clone();
        for i in (r..n).rev() {
            if rem[i] != 0 {
                for (j, &g) in self.generator.iter().enumerate() {
                    rem[i - r + j] ^= g;
                }
            }
        }
        word[..r].copy_from_slice(&rem[..r]);
        Ok(word)
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u16> {
        (1..=2 * self.spec.t)
            .map(|j| {
                let mut s = 0u16;
                for (i, &b) in word.iter().enumerate() {
                    if b != 0 {
                        s ^= self.field.alpha_pow(i * j);
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.spec.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    pub fn decode(&self, word: &[u8]) -> Result<DecodeOutcome<Vec<u8>>, CodecError> {
        let CodeSpec { n, k, t, .. } = self.spec;
        check_len(n, word.len())?;
        check_bits(word)?;
        let synd = self.syndromes(word);
        let r = n - k;
        if synd.iter().all(|&s| s == 0) {
            return Ok(DecodeOutcome::Decoded {
                message: word[r..].to_vec(),
                corrected: 0,
            });
        }
        let locator = self.field.berlekamp_massey(&synd);
        let errors = locator.len() - 1;
        if errors == 0 || errors > t {
            return Ok(DecodeOutcome::Failure);
        }
        let order = self.field.order();
        let mut fixed = word.to_vec();
        let mut found = 0;
        for p in 0..n {
            let x_inv = self.field.alpha_pow((order - p % order) % order);
            if self.field.eval(&locator, x_inv) == 0 {
                fixed[p] ^= 1;
                found += 1;
            }
        }
        if found != errors || !self.is_codeword(&fixed) {
            return Ok(DecodeOutcome::Failure);
        }
        Ok(DecodeOutcome::Decoded {
            message: fixed[r..].to_vec(),
            corrected: errors,
        })
    }

    /// The code shortened to `len` bits by fixing the top message bits to 0.
    pub fn shorten(self, len: usize) -> Result<ShortenedBch, CodecError> {
        let CodeSpec { n, k, .. } = self.spec;
        let removed = n.checked_sub(len).ok_or_else(|| {
            CodecError::Parameter(alloc::format!("cannot shorten length {n} to {len}"))
        })?;
        if removed >= k {
            return Err(CodecError::Parameter(alloc::format!(
                "shortening {n} -> {len} leaves no message bits (k = {k})"
            )));
        }
        Ok(ShortenedBch { inner: self, len })
    }
}

/// A shortened BCH code. Keeps the parent's `t`; the dimension drops by the
/// number of removed positions.
#[derive(Clone, Debug)]
pub struct ShortenedBch {
    inner: Bch,
    len: usize,
}

impl ShortenedBch {
    pub fn parent(&self) -> &Bch {
        &self.inner
    }

    pub fn spec(&self) -> CodeSpec {
        let p = self.inner.spec;
        let removed = p.n - self.len;
        CodeSpec {
            family: CodeFamily::Bch,
            n: self.len,
            k: p.k - removed,
            d: p.d,
            t: p.t,
        }
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>, CodecError> {
        let spec = self.spec();
        check_len(spec.k, message.len())?;
        let mut full = message.to_vec();
        full.resize(self.inner.spec.k, 0);
        let mut cw = self.inner.encode(&full)?;
        cw.truncate(self.len);
        Ok(cw)
    }

    pub fn decode(&self, word: &[u8]) -> Result<DecodeOutcome<Vec<u8>>, CodecError> {
        let spec = self.spec();
        check_len(self.len, word.len())?;
        let mut full = word.to_vec();
        full.resize(self.inner.spec.n, 0);
        Ok(match self.inner.decode(&full)? {
            DecodeOutcome::Decoded { message, corrected } => {
                if message[spec.k..].iter().any(|&b| b != 0) {
                    // corrected into the removed positions: not a shortened codeword
                    DecodeOutcome::Failure
                } else {
                    DecodeOutcome::Decoded {
                        message: message[..spec.k].to_vec(),
                        corrected,
                    }
                }
            }
            DecodeOutcome::Failure => DecodeOutcome::Failure,
        })
    }
}
