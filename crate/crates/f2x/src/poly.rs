//! Bit-packed polynomials over `F2`.
//!
//! A [`Poly2`] stores coefficients little-endian in 64-bit limbs: bit `i` of
//! the limb vector is the coefficient of `x^i`. The representation is kept
//! normalized — no trailing zero limbs — so structural equality is coefficient
//! equality and the zero polynomial is the empty limb vector.
//!
//! The degree of the zero polynomial is a distinct sentinel
//! ([`Degree::NegInf`]), never `-1`; all comparisons against it are explicit.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Degree of a polynomial, or the order of a Laurent tail: the largest index
/// carrying a nonzero coefficient. `NegInf` is the value for 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Unwrap a degree known to be finite.
    pub fn expect_finite(self) -> i64 {
        self.finite().expect("degree of the zero polynomial")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Largest exponent accepted by the default parser. Guards against
/// pathological inputs like `x^10000000000`; use [`Poly2::parse_with_cap`]
/// to raise or lower it.
pub const DEFAULT_DEGREE_CAP: i64 = 1 << 16;

/// A polynomial over `F2`, packed 64 coefficients per limb.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

// ---- Constructors and basic accessors ----

impl Poly2 {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    /// The constant 1.
    pub fn one() -> Self {
        Poly2 { limbs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly2 { limbs: vec![2] }
    }

    /// The monomial `x^k`.
    pub fn x_pow(k: u32) -> Self {
        let mut limbs = vec![0u64; k as usize / 64 + 1];
        limbs[k as usize / 64] = 1u64 << (k % 64);
        Poly2 { limbs }
    }

    /// Coefficients from the low 64 bits: bit `i` is the coefficient of `x^i`.
    pub fn from_bits(bits: u64) -> Self {
        if bits == 0 {
            Poly2::zero()
        } else {
            Poly2 { limbs: vec![bits] }
        }
    }

    /// Coefficients from little-endian limbs.
    pub fn from_limbs(limbs: &[u64]) -> Self {
        let mut p = Poly2 { limbs: limbs.to_vec() };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, with [`Degree::NegInf`] for 0.
    pub fn deg(&self) -> Degree {
        match self.limbs.last() {
            None => Degree::NegInf,
            Some(&top) => Degree::Finite(
                (self.limbs.len() as i64 - 1) * 64 + (63 - top.leading_zeros() as i64),
            ),
        }
    }

    /// Coefficient of `x^i`.
    pub fn coeff(&self, i: u64) -> bool {
        let limb = (i / 64) as usize;
        limb < self.limbs.len() && (self.limbs[limb] >> (i % 64)) & 1 == 1
    }

    /// The low 64 coefficient bits. Panics if the degree is 64 or more.
    pub fn bits_u64(&self) -> u64 {
        assert!(self.limbs.len() <= 1, "polynomial does not fit in 64 bits");
        self.limbs.first().copied().unwrap_or(0)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u64 {
        self.limbs.iter().map(|l| l.count_ones() as u64).sum()
    }
}

// ---- Ring operations ----

impl Poly2 {
    /// Sum (= difference) in characteristic 2: coefficient-wise XOR.
    pub fn add(&self, rhs: &Poly2) -> Poly2 {
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut limbs = long.limbs.clone();
        for (i, l) in short.limbs.iter().enumerate() {
            limbs[i] ^= l;
        }
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    /// Carry-less product.
    pub fn mul(&self, rhs: &Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::zero();
        }
        let mut limbs = vec![0u64; self.limbs.len() + rhs.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.limbs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let (lo, hi) = clmul64(a, b);
                limbs[i + j] ^= lo;
                limbs[i + j + 1] ^= hi;
            }
        }
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    /// Multiply by `x^k`.
    pub fn shl(&self, k: u64) -> Poly2 {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let limb_shift = (k / 64) as usize;
        let bit_shift = (k % 64) as u32;
        let mut limbs = vec![0u64; self.limbs.len() + limb_shift + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            limbs[i + limb_shift] ^= l << bit_shift;
            if bit_shift != 0 {
                limbs[i + limb_shift + 1] ^= l >> (64 - bit_shift);
            }
        }
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    /// Quotient and remainder of division by `b`. Panics if `b` is zero,
    /// like integer division.
    pub fn divmod(&self, b: &Poly2) -> (Poly2, Poly2) {
        let db = match b.deg() {
            Degree::NegInf => panic!("division by the zero polynomial"),
            Degree::Finite(d) => d,
        };
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Degree::Finite(dr) = rem.deg() {
            if dr < db {
                break;
            }
            let k = (dr - db) as u64;
            if quot.limbs.len() <= (k / 64) as usize {
                quot.limbs.resize((k / 64) as usize + 1, 0);
            }
            quot.limbs[(k / 64) as usize] ^= 1u64 << (k % 64);
            rem = rem.add(&b.shl(k));
        }
        quot.normalize();
        (quot, rem)
    }

    /// Remainder of division by `b`.
    pub fn rem(&self, b: &Poly2) -> Poly2 {
        self.divmod(b).1
    }

    /// Whether `self` divides `f`. The zero polynomial divides only itself.
    pub fn divides(&self, f: &Poly2) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.rem(self).is_zero()
    }

    /// Greatest common divisor. `gcd(0, 0)` is undefined and panics.
    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        assert!(
            !(self.is_zero() && other.is_zero()),
            "gcd(0, 0) is undefined"
        );
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Extended gcd: returns `(g, u, v)` with `u*self + v*other = g`.
    pub fn xgcd(&self, other: &Poly2) -> (Poly2, Poly2, Poly2) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly2::one(), Poly2::zero());
        let (mut v0, mut v1) = (Poly2::zero(), Poly2::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            r0 = r1;
            r1 = r;
            let u = u0.add(&q.mul(&u1));
            u0 = u1;
            u1 = u;
            let v = v0.add(&q.mul(&v1));
            v0 = v1;
            v1 = v;
        }
        (r0, u0, v0)
    }

    /// Inverse of `self` mod `m` (`deg m >= 1`). Errors when the inputs are
    /// not coprime.
    pub fn inv_mod(&self, m: &Poly2) -> Result<Poly2> {
        assert!(
            m.deg() >= Degree::Finite(1),
            "modulus must have degree at least 1"
        );
        let a = self.rem(m);
        if a.is_zero() {
            return Err(Error::NotInvertible {
                a: self.clone(),
                modulus: m.clone(),
                gcd: m.clone(),
            });
        }
        let (g, u, _) = a.xgcd(m);
        if !g.is_one() {
            return Err(Error::NotInvertible {
                a: self.clone(),
                modulus: m.clone(),
                gcd: g,
            });
        }
        Ok(u.rem(m))
    }

    /// `self * rhs mod m`.
    pub fn mulmod(&self, rhs: &Poly2, m: &Poly2) -> Poly2 {
        self.mul(rhs).rem(m)
    }
}

// ---- Enumeration helpers (small degrees, used by tables and tests) ----

/// All polynomials of degree below `n`, i.e. the box `G_n`, in increasing
/// bit order (`n <= 63`).
pub fn polys_below(n: u32) -> impl Iterator<Item = Poly2> {
    assert!(n <= 63, "enumeration limited to 63 coefficient bits");
    (0u64..1u64 << n).map(Poly2::from_bits)
}

/// All polynomials of degree exactly `d` (`d <= 62`).
pub fn polys_of_deg(d: u32) -> impl Iterator<Item = Poly2> {
    assert!(d <= 62, "enumeration limited to 63 coefficient bits");
    (1u64 << d..1u64 << (d + 1)).map(Poly2::from_bits)
}

// ---- Carry-less multiply kernel ----

/// 64x64 -> 128 carry-less multiply, portable fallback.
#[inline]
fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut rem = b;
    while rem != 0 {
        let i = rem.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        rem &= rem - 1;
    }
    (lo, hi)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2", enable = "sse4.1")]
unsafe fn clmul64_hw(a: u64, b: u64) -> (u64, u64) {
    use core::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128::<0>(va, vb);
    (
        _mm_cvtsi128_si64(r) as u64,
        _mm_extract_epi64::<1>(r) as u64,
    )
}

#[cfg(target_arch = "x86_64")]
static HAS_CLMUL: std::sync::LazyLock<bool> = std::sync::LazyLock::new(|| {
    std::arch::is_x86_feature_detected!("pclmulqdq")
        && std::arch::is_x86_feature_detected!("sse4.1")
});

#[inline]
fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    if *HAS_CLMUL {
        // Safety: feature presence checked at runtime above.
        return unsafe { clmul64_hw(a, b) };
    }
    clmul64_soft(a, b)
}

/// Portable-kernel product, exposed so tests can pin hardware and fallback
/// paths against each other.
pub fn mul_soft(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() || b.is_zero() {
        return Poly2::zero();
    }
    let mut limbs = vec![0u64; a.limbs.len() + b.limbs.len()];
    for (i, &la) in a.limbs.iter().enumerate() {
        for (j, &lb) in b.limbs.iter().enumerate() {
            let (lo, hi) = clmul64_soft(la, lb);
            limbs[i + j] ^= lo;
            limbs[i + j + 1] ^= hi;
        }
    }
    Poly2::from_limbs(&limbs)
}

// ---- Ordering ----

// Sort by degree, then by coefficient bits as an integer. This puts e.g.
// x^2 < x^2+1 < x^2+x < x^2+x+1, the order used by factorizations and tables.
impl Ord for Poly2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---- Parsing and printing ----
//
// Grammar:   expr := literal | term ('+' term)*
//            term := "0" | "1" | "x" | "x^" uint
//            literal := "0b" [01]+ | "0x" [0-9a-fA-F]+
// Whitespace is ignored everywhere. Repeated terms cancel (characteristic 2),
// so "x^2+x^2" parses to 0. In literals, bit i is the coefficient of x^i.

impl Poly2 {
    /// Parse the textual form, rejecting exponents above `cap`.
    pub fn parse_with_cap(s: &str, cap: i64) -> Result<Poly2> {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
            cap,
        }
        .parse()
    }

    /// Parse with the default exponent cap.
    pub fn parse(s: &str) -> Result<Poly2> {
        Poly2::parse_with_cap(s, DEFAULT_DEGREE_CAP)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    cap: i64,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly2> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return self.err(self.pos, "empty input");
        }
        // A base literal must be the whole expression.
        if self.bytes[self.pos] == b'0' && self.pos + 1 < self.bytes.len() {
            let marker = self.bytes[self.pos + 1];
            if marker == b'b' || marker == b'B' || marker == b'x' || marker == b'X' {
                return self.parse_literal();
            }
        }
        let mut acc = self.parse_term()?;
        while let Some(c) = self.peek() {
            if c != b'+' {
                return self.err(self.pos, format!("expected '+', found {:?}", c as char));
            }
            self.pos += 1;
            acc = acc.add(&self.parse_term()?);
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly2> {
        match self.peek() {
            None => self.err(self.pos, "expected a term"),
            Some(b'0') => {
                self.pos += 1;
                Ok(Poly2::zero())
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Poly2::one())
            }
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.parse_uint()?;
                    Ok(Poly2::x_pow(k as u32))
                } else {
                    Ok(Poly2::x())
                }
            }
            Some(c) => self.err(self.pos, format!("unexpected {:?}", c as char)),
        }
    }

    fn parse_uint(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut val: i64 = 0;
        while let Some(&c) = self.bytes.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            val = val * 10 + (c - b'0') as i64;
            if val > self.cap {
                return self.err(start, format!("exponent exceeds cap {}", self.cap));
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(start, "expected an exponent");
        }
        Ok(val)
    }

    fn parse_literal(mut self) -> Result<Poly2> {
        let base_pos = self.pos;
        let hex = matches!(self.bytes[self.pos + 1], b'x' | b'X');
        self.pos += 2;
        let digits_start = self.pos;
        let mut limbs: Vec<u64> = Vec::new();
        let mut nbits = 0usize;
        let push_bits = |v: u64, width: usize, limbs: &mut Vec<u64>, nbits: &mut usize| {
            // Digits arrive most-significant first; shift accumulated bits up.
            let mut carry = v;
            for l in limbs.iter_mut() {
                let next = *l >> (64 - width);
                *l = (*l << width) | carry;
                carry = next;
            }
            if carry != 0 || limbs.is_empty() {
                limbs.push(carry);
            }
            *nbits += width;
        };
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
                continue;
            }
            let width = if hex { 4 } else { 1 };
            let v = match (hex, c) {
                (false, b'0' | b'1') => (c - b'0') as u64,
                (true, b'0'..=b'9') => (c - b'0') as u64,
                (true, b'a'..=b'f') => (c - b'a' + 10) as u64,
                (true, b'A'..=b'F') => (c - b'A' + 10) as u64,
                _ => return self.err(self.pos, format!("invalid digit {:?}", c as char)),
            };
            push_bits(v, width, &mut limbs, &mut nbits);
            if nbits as i64 > self.cap + 64 {
                return self.err(base_pos, format!("literal exceeds degree cap {}", self.cap));
            }
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err(self.pos, "literal has no digits");
        }
        Ok(Poly2::from_limbs(&limbs))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let deg = self.deg().expect_finite();
        for i in (0..=deg as u64).rev() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl FromStr for Poly2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly2> {
        Poly2::parse(s)
    }
}

// ---- Operator sugar ----

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl std::ops::$trait<&Poly2> for &Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: &Poly2) -> Poly2 {
                Poly2::$imp(self, rhs)
            }
        }
        impl std::ops::$trait<Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                Poly2::$imp(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: &Poly2) -> Poly2 {
                Poly2::$imp(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Mul, mul, mul);

impl std::ops::Rem<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn rem(self, rhs: &Poly2) -> Poly2 {
        Poly2::rem(self, rhs)
    }
}
