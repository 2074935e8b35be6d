//! Runtime-sized binary extension fields GF(2^m), 3 <= m <= 10.

use alloc::vec;
use alloc::vec::Vec;

use super::CodecError;

/// Primitive polynomials, indexed by `m`.
const PRIMITIVE: [u16; 11] = [0, 0, 0, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409];

#[derive(Clone, Debug)]
pub struct BinaryField {
    m: u32,
    order: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl BinaryField {
    pub fn new(m: u32) -> Result<Self, CodecError> {
        if !(3..=10).contains(&m) {
            return Err(CodecError::Parameter(alloc::format!(
                "field degree m={m} outside 3..=10"
            )));
        }
        let size = 1usize << m;
        let order = size - 1;
        let poly = PRIMITIVE[m as usize];
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; size];
        let mut x: u16 = 1;
        for i in 0..order {
            exp[i] = x;
            log[x as usize] = i as u16;
            x <<= 1;
            if x as usize & size != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, order, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative group order `2^m - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn alpha_pow(&self, e: usize) -> u16 {
        self.exp[e % self.order]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.exp[(self.order - self.log[a as usize] as usize) % self.order])
    }

    pub fn div(&self, a: u16, b: u16) -> Option<u16> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Evaluates a lowest-degree-first polynomial.
    pub fn eval(&self, poly: &[u16], x: u16) -> u16 {
        poly.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Cyclotomic coset of `i` modulo `2^m - 1`.
    pub fn coset(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i % self.order];
        let mut j = (2 * i) % self.order;
        while j != out[0] {
            out.push(j);
            j = (2 * j) % self.order;
        }
        out
    }

    /// Minimal polynomial of `α^i` over GF(2), lowest degree first, as bits.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<u8> {
        let mut poly = vec![1u16];
        for e in self.coset(i) {
            let root = self.alpha_pow(e);
            let mut next = vec![0u16; poly.len() + 1];
            for (j, &c) in poly.iter().enumerate() {
                next[j + 1] ^= c;
                next[j] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "minimal polynomial must have binary coefficients");
                c as u8
            })
            .collect()
    }

    /// Berlekamp-Massey over this field; returns the connection polynomial,
    /// lowest degree first and trimmed to its true degree.
    pub fn berlekamp_massey(&self, synd: &[u16]) -> Vec<u16> {
        let mut c = vec![1u16];
        let mut b = vec![1u16];
        let mut l = 0usize;
        let mut m = 1usize;
        let mut bd = 1u16;
        for n in 0..synd.len() {
            let mut d = synd[n];
            for i in 1..=l.min(c.len() - 1) {
                d ^= self.mul(c[i], synd[n - i]);
            }
            if d == 0 {
                m += 1;
                continue;
            }
            let coef = self.div(d, bd).expect("bd is nonzero");
            let t = c.clone();
            if c.len() < b.len() + m {
                c.resize(b.len() + m, 0);
            }
            for (i, &bi) in b.iter().enumerate() {
                c[i + m] ^= self.mul(coef, bi);
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
}
