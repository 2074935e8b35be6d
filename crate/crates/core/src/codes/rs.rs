//! Reed-Solomon codes over GF(256).
//!
//! Codewords are systematic, `[message | parity]`, with `word[0]` the
//! coefficient of the highest power. The generator polynomial has the
//! consecutive roots `α^0, …, α^(n-k-1)`. Decoding is syndrome based:
//! Berlekamp-Massey for the locator, Chien search, then Forney.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_len, CodeSpec, CodecError, DecodeOutcome};
use crate::gf256::{mul, FieldElem256, EXP, LOG};

#[derive(Clone, Debug)]
pub struct ReedSolomon {
    spec: CodeSpec,
    /// Monic generator, highest degree first.
    generator: Vec<u8>,
}

impl ReedSolomon {
    /// The RS(255, 32, 224) code used by the orDNA vault.
    pub fn rs255() -> Self {
        Self::new(255, 32).expect("static parameters are valid")
    }

    pub fn new(n: usize, k: usize) -> Result<Self, CodecError> {
        if n > 255 || k == 0 || k >= n {
            return Err(CodecError::Parameter(alloc::format!(
                "RS over GF(256) needs 0 < k < n <= 255 (got n={n}, k={k})"
            )));
        }
        let nsym = n - k;
        let mut generator = vec![1u8];
        for i in 0..nsym {
            // multiply by (x - α^i)
            let root = EXP[i];
            let mut next = vec![0u8; generator.len() + 1];
            for (j, &g) in generator.iter().enumerate() {
                next[j] ^= g;
                next[j + 1] ^= mul(g, root);
            }
            generator = next;
        }
        let d = nsym + 1;
        let spec = CodeSpec {
            family: super::CodeFamily::Rs255,
            n,
            k,
            d,
            t: (d - 1) / 2,
        };
        Ok(Self { spec, generator })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>, CodecError> {
        check_len(self.spec.k, message.len())?;
        let nsym = self.spec.n - self.spec.k;
        let mut work = vec![0u8; self.spec.n];
        work[..self.spec.k].copy_from_slice(message);
        // synthetic division by the monic generator
        for i in 0..self.spec.k {
            let coef = work[i];
            if coef != 0 {
                for j in 1..=nsym {
                    work[i + j] ^= mul(self.generator[j], coef);
                }
            }
        }
        let mut out = Vec::with_capacity(self.spec.n);
        out.extend_from_slice(message);
        out.extend_from_slice(&work[self.spec.k..]);
        Ok(out)
    }

    /// Syndromes `S_j = r(α^j)`, `j < n - k`.
    pub fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        let nsym = self.spec.n - self.spec.k;
        (0..nsym).map(|j| eval_at_alpha_pow(word, j)).collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.spec.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    /// Bounded-distance decode of a received word.
    pub fn decode(&self, word: &[u8]) -> Result<DecodeOutcome<Vec<u8>>, CodecError> {
        check_len(self.spec.n, word.len())?;
        let n = self.spec.n;
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(DecodeOutcome::Decoded {
                message: word[..self.spec.k].to_vec(),
                corrected: 0,
            });
        }
        let locator = berlekamp_massey(&synd);
        let errors = locator.len() - 1;
        if errors == 0 || errors > self.spec.t {
            return Ok(DecodeOutcome::Failure);
        }

        // Chien search: position p (power of x) is in error iff Λ(α^-p) = 0.
        let mut positions = Vec::with_capacity(errors);
        for p in 0..n {
            let x_inv = EXP[(255 - p % 255) % 255];
            if poly_eval_low(&locator, x_inv) == 0 {
                positions.push(p);
            }
        }
        if positions.len() != errors {
            return Ok(DecodeOutcome::Failure);
        }

        // Ω(x) = S(x) Λ(x) mod x^(n-k)
        let nsym = synd.len();
        let mut omega = vec![0u8; nsym];
        for (i, &s) in synd.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (j, &l) in locator.iter().enumerate() {
                if i + j < nsym {
                    omega[i + j] ^= mul(s, l);
                }
            }
        }
        // Λ'(x): only odd-degree terms survive in characteristic 2.
        let deriv: Vec<u8> = (1..locator.len())
            .map(|i| if i % 2 == 1 { locator[i] } else { 0 })
            .collect();

        let mut corrected = word.to_vec();
        for &p in &positions {
            let x = FieldElem256(EXP[p % 255]);
            let x_inv = x.inv().expect("nonzero");
            let num = poly_eval_low(&omega, x_inv.0);
            let den = poly_eval_low(&deriv, x_inv.0);
            if den == 0 {
                return Ok(DecodeOutcome::Failure);
            }
            // e = X^(1-b) Ω(X^-1) / Λ'(X^-1) with first root exponent b = 0
            let magnitude = FieldElem256(num) / FieldElem256(den) * x;
            let idx = n - 1 - p;
            corrected[idx] ^= magnitude.0;
        }
        if !self.is_codeword(&corrected) {
            return Ok(DecodeOutcome::Failure);
        }
        Ok(DecodeOutcome::Decoded {
            message: corrected[..self.spec.k].to_vec(),
            corrected: errors,
        })
    }
}

/// Evaluates a highest-degree-first polynomial at `α^j` by Horner's rule.
fn eval_at_alpha_pow(word: &[u8], j: usize) -> u8 {
    let x = EXP[j % 255];
    let lx = LOG[x as usize] as usize;
    let mut acc = 0u8;
    for &c in word {
        acc = if acc == 0 {
            c
        } else {
            EXP[LOG[acc as usize] as usize + lx] ^ c
        };
    }
    acc
}

/// Evaluates a lowest-degree-first polynomial.
fn poly_eval_low(poly: &[u8], x: u8) -> u8 {
    let mut acc = 0u8;
    for &c in poly.iter().rev() {
        acc = mul(acc, x) ^ c;
    }
    acc
}

/// Connection polynomial (lowest degree first, `Λ(0) = 1`) of the shortest
/// LFSR generating `synd`. Trailing zero coefficients are trimmed so the
/// length is `deg Λ + 1`.
pub(crate) fn berlekamp_massey(synd: &[u8]) -> Vec<u8> {
    let mut c = vec![1u8];
    let mut b = vec![1u8];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = 1u8;
    for n in 0..synd.len() {
        let mut d = synd[n];
        for i in 1..=l.min(c.len() - 1) {
            d ^= mul(c[i], synd[n - i]);
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = (FieldElem256(d) / FieldElem256(bd)).0;
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] ^= mul(coef, bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_message(rng: &mut ChaCha8Rng) -> Vec<u8> {
        (0..32).map(|_| rng.random()).collect()
    }

    fn corrupt(word: &mut [u8], count: usize, rng: &mut ChaCha8Rng) {
        let idx = rand::seq::index::sample(rng, word.len(), count);
        for i in idx {
            let delta: u8 = rng.random_range(1..=255);
            word[i] ^= delta;
        }
    }

    #[test]
    fn zero_message_gives_zero_codeword() {
        let rs = ReedSolomon::rs255();
        let cw = rs.encode(&[0u8; 32]).unwrap();
        assert!(cw.iter().all(|&b| b == 0));
    }

    #[test]
    fn unit_messages_have_weight_at_least_d() {
        let rs = ReedSolomon::rs255();
        for i in 0..32 {
            let mut m = [0u8; 32];
            m[i] = 1;
            let cw = rs.encode(&m).unwrap();
            let weight = cw.iter().filter(|&&b| b != 0).count();
            assert!(weight >= 224, "unit {i} has weight {weight}");
            assert!(rs.is_codeword(&cw));
        }
    }

    #[test]
    fn encoding_is_linear() {
        let rs = ReedSolomon::rs255();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_message(&mut rng);
            let b = random_message(&mut rng);
            let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let lhs = rs.encode(&ab).unwrap();
            let rhs: Vec<u8> = rs
                .encode(&a)
                .unwrap()
                .iter()
                .zip(rs.encode(&b).unwrap())
                .map(|(x, y)| x ^ y)
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn clean_codeword_decodes() {
        let rs = ReedSolomon::rs255();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_message(&mut rng);
        let cw = rs.encode(&m).unwrap();
        assert_eq!(rs.decode(&cw).unwrap().message(), Some(m));
    }

    #[test]
    fn corrects_up_to_t_errors() {
        let rs = ReedSolomon::rs255();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for errors in [1usize, 2, 17, 56, 110, 111] {
            for _ in 0..5 {
                let m = random_message(&mut rng);
                let mut w = rs.encode(&m).unwrap();
                corrupt(&mut w, errors, &mut rng);
                match rs.decode(&w).unwrap() {
                    DecodeOutcome::Decoded { message, corrected } => {
                        assert_eq!(message, m);
                        assert_eq!(corrected, errors);
                    }
                    DecodeOutcome::Failure => panic!("failed at {errors} errors"),
                }
            }
        }
    }

    #[test]
    fn beyond_t_is_not_silently_accepted() {
        let rs = ReedSolomon::rs255();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let m = random_message(&mut rng);
            let mut w = rs.encode(&m).unwrap();
            corrupt(&mut w, 140, &mut rng);
            assert_ne!(rs.decode(&w).unwrap().message(), Some(m));
        }
    }

    #[test]
    fn wrong_length_is_an_error() {
        let rs = ReedSolomon::rs255();
        assert_eq!(
            rs.encode(&[0u8; 31]),
            Err(CodecError::Length {
                expected: 32,
                got: 31
            })
        );
        assert!(rs.decode(&[0u8; 254]).is_err());
    }

    #[test]
    fn small_code_parameters() {
        let rs = ReedSolomon::new(15, 7).unwrap();
        assert_eq!(rs.spec().t, 4);
        let m = [1u8, 2, 3, 4, 5, 6, 7];
        let mut w = rs.encode(&m).unwrap();
        w[0] ^= 9;
        w[5] ^= 1;
        w[14] ^= 200;
        w[9] ^= 3;
        assert_eq!(rs.decode(&w).unwrap().message().unwrap(), m.to_vec());
    }
}
