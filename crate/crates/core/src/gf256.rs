//! Arithmetic in the field with 256 elements.
//!
//! The field is GF(2)[x] / (x^8 + x^4 + x^3 + x^2 + 1), i.e. the
//! conventional polynomial `0x11D`, with generator `α = x = 0x02`.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub};

/// Reduction polynomial of the field.
pub const POLY: u16 = 0x11D;

const fn build_tables() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= POLY;
        }
        i += 1;
    }
    // Doubled so `exp[log a + log b]` never needs a reduction.
    while i < 512 {
        exp[i] = exp[i - 255];
        i += 1;
    }
    (exp, log)
}

const TABLES: ([u8; 512], [u8; 256]) = build_tables();
/// `EXP[i] = α^i` for `i < 510`.
pub const EXP: [u8; 512] = TABLES.0;
/// `LOG[a]` for nonzero `a`; `LOG[0]` is unused.
pub const LOG: [u8; 256] = TABLES.1;

/// An element of GF(256).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElem256(pub u8);

impl FieldElem256 {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// The generator `α`.
    pub const fn alpha() -> Self {
        Self(2)
    }

    /// `α^e` for any exponent (taken modulo 255).
    pub fn alpha_pow(e: i64) -> Self {
        Self(EXP[e.rem_euclid(255) as usize])
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete logarithm base `α`, `None` for zero.
    pub fn log(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(LOG[self.0 as usize])
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self) -> Option<Self> {
        self.log().map(|l| Self(EXP[(255 - l as usize) % 255]))
    }

    pub fn pow(self, e: u32) -> Self {
        if e == 0 {
            return Self::ONE;
        }
        match self.log() {
            None => Self::ZERO,
            Some(l) => Self(EXP[((l as u64 * e as u64) % 255) as usize]),
        }
    }
}

impl fmt::Debug for FieldElem256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({:#04x})", self.0)
    }
}

impl From<u8> for FieldElem256 {
    fn from(v: u8) -> Self {
        Self(v)
    }
}

impl From<FieldElem256> for u8 {
    fn from(v: FieldElem256) -> Self {
        v.0
    }
}

impl Add for FieldElem256 {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElem256 {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Sub for FieldElem256 {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl Mul for FieldElem256 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self(mul(self.0, rhs.0))
    }
}

impl MulAssign for FieldElem256 {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        self.0 = mul(self.0, rhs.0);
    }
}

impl Div for FieldElem256 {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero in GF(256)");
        self * inv
    }
}

/// Raw byte multiplication.
#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
    }
}
