//! Arithmetic in the prime field GF(q) and the extension GF(q^m).
//!
//! Extension elements are coordinate vectors over GF(q) with respect to the
//! polynomial basis `1, a, ..., a^(m-1)`, where `a` is a root of the field
//! modulus. A [`FieldElement`] packs those coordinates as the integer
//! `sum c_i q^i`, so for `q = 2` the value is simply the bit mask of the
//! coordinates. All arithmetic goes through an [`ExtensionField`] descriptor.
//!
//! The modulus for each `(q, m)` is the lexicographically smallest monic
//! irreducible polynomial, comparing coefficient tuples `(c_0, c_1, ...)`
//! starting at the constant term.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];
pub const MAX_DEGREE: usize = 32;

/// The prime field GF(q); elements are `u8` residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !(2..=251).contains(&q) || !(2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
            return Err(Error::UnsupportedPrime(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.q) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.q - b as u32) % self.q) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        ((self.q - a as u32) % self.q) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.q) as u8
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if (a as u32).is_multiple_of(self.q) {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(q-2)
        let mut acc = 1u32;
        for _ in 0..self.q - 2 {
            acc = acc * a as u32 % self.q;
        }
        Ok(acc as u8)
    }

    pub fn div(&self, a: u8, b: u8) -> Result<u8> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// An element of GF(q^m), packed as `sum c_i q^i` over its coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u128);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a packed value without checking it against any field.
    #[inline]
    pub const fn from_packed(v: u128) -> Self {
        FieldElement(v)
    }

    #[inline]
    pub const fn packed(self) -> u128 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of an extension field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub q: u32,
    pub m: usize,
    /// Monic modulus coefficients, constant term first (length `m + 1`).
    pub modulus: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    m: usize,
    modulus: Vec<u8>,
    order: u128,
    /// q = 2 only: modulus bits below x^m.
    low_mask: u64,
}

impl ExtensionField {
    pub fn new(q: u32, m: usize) -> Result<Self> {
        if !SUPPORTED_PRIMES.contains(&q) {
            return Err(Error::UnsupportedPrime(q));
        }
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let modulus = smallest_irreducible(q, m);
        Ok(Self::with_modulus_unchecked(q, m, modulus))
    }

    /// Builds a field from an explicit modulus, verifying it is monic and irreducible.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        if !SUPPORTED_PRIMES.contains(&desc.q) {
            return Err(Error::UnsupportedPrime(desc.q));
        }
        if !(1..=MAX_DEGREE).contains(&desc.m) {
            return Err(Error::UnsupportedDegree(desc.m));
        }
        let f = &desc.modulus;
        if f.len() != desc.m + 1 || f[desc.m] != 1 || f.iter().any(|&c| c as u32 >= desc.q) {
            return Err(Error::InvalidParameters(
                "modulus must be monic of degree m with coefficients in GF(q)".into(),
            ));
        }
        if !poly::is_irreducible(desc.q, f) {
            return Err(Error::InvalidParameters("modulus is reducible".into()));
        }
        Ok(Self::with_modulus_unchecked(desc.q, desc.m, f.clone()))
    }

    fn with_modulus_unchecked(q: u32, m: usize, modulus: Vec<u8>) -> Self {
        let low_mask = if q == 2 {
            modulus[..m]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        Self {
            base: PrimeField { q },
            m,
            order: (q as u128).pow(m as u32),
            modulus,
            low_mask,
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            q: self.q(),
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.base.q
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn base(&self) -> PrimeField {
        self.base
    }

    /// Number of elements, q^m.
    #[inline]
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    fn is_binary(&self) -> bool {
        self.base.q == 2
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.order
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::NotInField {
                q: self.q(),
                m: self.m,
            })
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The i-th polynomial-basis element (coordinate vector e_i).
    pub fn basis_element(&self, i: usize) -> FieldElement {
        assert!(i < self.m, "basis index {i} out of range for m = {}", self.m);
        FieldElement((self.q() as u128).pow(i as u32))
    }

    /// Embeds a base-field scalar.
    pub fn from_base(&self, c: u8) -> FieldElement {
        FieldElement((c as u32 % self.q()) as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.order))
    }

    /// Coordinates over GF(q), constant term first.
    pub fn coords(&self, a: FieldElement) -> Vec<u8> {
        self.digits(a)[..self.m].to_vec()
    }

    pub fn from_coords(&self, coords: &[u8]) -> Result<FieldElement> {
        if coords.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: coords.len(),
            });
        }
        if coords.iter().any(|&c| c as u32 >= self.q()) {
            return Err(Error::NotInField {
                q: self.q(),
                m: self.m,
            });
        }
        Ok(self.pack(coords))
    }

    #[inline]
    pub(crate) fn coord(&self, a: FieldElement, i: usize) -> u8 {
        if self.is_binary() {
            ((a.0 >> i) & 1) as u8
        } else {
            ((a.0 / (self.q() as u128).pow(i as u32)) % self.q() as u128) as u8
        }
    }

    fn digits(&self, a: FieldElement) -> [u8; MAX_DEGREE] {
        let mut out = [0u8; MAX_DEGREE];
        let q = self.q() as u128;
        let mut v = a.0;
        for d in out.iter_mut().take(self.m) {
            *d = (v % q) as u8;
            v /= q;
        }
        out
    }

    fn pack(&self, digits: &[u8]) -> FieldElement {
        let q = self.q() as u128;
        FieldElement(
            digits[..self.m]
                .iter()
                .rev()
                .fold(0u128, |acc, &d| acc * q + d as u128),
        )
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.is_binary() {
            return FieldElement(a.0 ^ b.0);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..self.m {
            out[i] = self.base.add(da[i], db[i]);
        }
        self.pack(&out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.is_binary() {
            return FieldElement(a.0 ^ b.0);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..self.m {
            out[i] = self.base.sub(da[i], db[i]);
        }
        self.pack(&out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    /// Multiplies by a base-field scalar.
    #[inline]
    pub fn scale(&self, a: FieldElement, c: u8) -> FieldElement {
        let c = c % self.q() as u8;
        if self.is_binary() {
            return if c == 0 { FieldElement::ZERO } else { a };
        }
        let da = self.digits(a);
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..self.m {
            out[i] = self.base.mul(da[i], c);
        }
        self.pack(&out)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.is_binary() {
            return FieldElement(self.mul_binary(a.0 as u64, b.0 as u64) as u128);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let q = self.q();
        let m = self.m;
        let mut prod = [0u32; 2 * MAX_DEGREE];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += da[i] as u32 * db[j] as u32;
            }
        }
        for c in prod.iter_mut() {
            *c %= q;
        }
        // reduce by the monic modulus from the top down
        for top in (m..2 * m - 1).rev() {
            let c = prod[top] % q;
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..m {
                let idx = top - m + j;
                prod[idx] = (prod[idx] + (q - c) * self.modulus[j] as u32) % q;
            }
        }
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..m {
            out[i] = (prod[i] % q) as u8;
        }
        self.pack(&out)
    }

    #[inline]
    fn mul_binary(&self, mut a: u64, mut b: u64) -> u64 {
        let top = 1u64 << self.m;
        let mut r = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= top | self.low_mask;
            }
        }
        r
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(q^i)`; the exponent index is reduced modulo m.
    pub fn frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        let i = i % self.m;
        let mut x = a;
        for _ in 0..i {
            x = if self.is_binary() {
                self.mul(x, x)
            } else {
                self.pow(x, self.q() as u128)
            };
        }
        x
    }

    /// `a^(q^-i)`, the inverse Frobenius power.
    pub fn frobenius_inv(&self, a: FieldElement, i: usize) -> FieldElement {
        let i = i % self.m;
        self.frobenius(a, (self.m - i) % self.m)
    }

    /// Sum of the m Frobenius conjugates; always lands in GF(q).
    pub fn trace(&self, a: FieldElement) -> u8 {
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..self.m {
            acc = self.add(acc, x);
            x = self.frobenius(x, 1);
        }
        debug_assert!(acc.0 < self.q() as u128, "trace left the base field");
        acc.0 as u8
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on GF(q)[x].
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_binary() {
            return Ok(FieldElement(self.inv_binary(a.0 as u64) as u128));
        }
        let ap = poly::trimmed(self.coords(a));
        let s = poly::inverse_mod(self.q(), &ap, &self.modulus);
        let mut coords = s;
        coords.resize(self.m, 0);
        Ok(self.pack(&coords))
    }

    fn inv_binary(&self, a: u64) -> u64 {
        let f = (1u64 << self.m) | self.low_mask;
        let deg = |p: u64| 63 - p.leading_zeros();
        let (mut r0, mut r1) = (f, a);
        let (mut s0, mut s1) = (0u64, 1u64);
        while r1 != 0 {
            while r0 != 0 && deg(r0) >= deg(r1) {
                let sh = deg(r0) - deg(r1);
                r0 ^= r1 << sh;
                s0 ^= s1 << sh;
            }
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
        }
        debug_assert_eq!(r0, 1);
        // s0 has degree < m already, but reduce for safety of the invariant
        while s0 != 0 && deg(s0) >= self.m as u32 {
            s0 ^= f << (deg(s0) - self.m as u32);
        }
        s0
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Binds an element to this field, validating membership.
    pub fn element(&self, a: FieldElement) -> Result<Element<'_>> {
        Ok(Element {
            field: self,
            value: self.check(a)?,
        })
    }

    /// Little-endian digit string, constant term first (e.g. `"1011"`).
    pub fn format(&self, a: FieldElement) -> String {
        self.coords(a)
            .iter()
            .map(|&d| char::from(b'0' + d))
            .collect()
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let digits: Vec<u8> = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d < self.q())
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("invalid GF({}) digit {c:?}", self.q())))
            })
            .collect::<Result<_>>()?;
        self.from_coords(&digits)
            .map_err(|_| Error::Parse(format!("expected {} digits, got {:?}", self.m, s)))
    }
}

/// A field element bound to its field; binary operations check that both
/// operands come from the same field.
#[derive(Debug, Clone, Copy)]
pub struct Element<'f> {
    field: &'f ExtensionField,
    value: FieldElement,
}

impl<'f> Element<'f> {
    pub fn value(&self) -> FieldElement {
        self.value
    }

    pub fn field(&self) -> &'f ExtensionField {
        self.field
    }

    fn same_field(&self, other: &Element<'_>) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: FieldElement) -> Element<'f> {
        Element {
            field: self.field,
            value,
        }
    }

    pub fn try_add(&self, other: &Element<'_>) -> Result<Element<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Element<'_>) -> Result<Element<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Element<'_>) -> Result<Element<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &Element<'_>) -> Result<Element<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<Element<'f>> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }
}

impl fmt::Display for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Lexicographically smallest monic irreducible of degree m over GF(q),
/// comparing `(c_0, c_1, ..., c_{m-1})` with c_0 most significant.
pub fn smallest_irreducible(q: u32, m: usize) -> Vec<u8> {
    let total = (q as u128).pow(m as u32);
    // for m > 1 every candidate with c_0 = 0 is divisible by x
    let start = if m > 1 { total / q as u128 } else { 0 };
    for idx in start..total {
        let mut f = vec![0u8; m + 1];
        let mut v = idx;
        for j in (0..m).rev() {
            f[j] = (v % q as u128) as u8;
            v /= q as u128;
        }
        f[m] = 1;
        if poly::is_irreducible(q, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over GF(q), coefficients constant term first.
pub(crate) mod poly {
    pub fn trimmed(mut p: Vec<u8>) -> Vec<u8> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    fn inv_mod_q(q: u32, a: u8) -> u8 {
        (1..q).find(|&x| (x * a as u32) % q == 1).expect("nonzero residue") as u8
    }

    pub fn sub(q: u32, a: &[u8], b: &[u8]) -> Vec<u8> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0) as u32;
                let y = *b.get(i).unwrap_or(&0) as u32;
                ((x + q - y) % q) as u8
            })
            .collect();
        trimmed(out)
    }

    pub fn mul(q: u32, a: &[u8], b: &[u8]) -> Vec<u8> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u32 * y as u32) % q;
            }
        }
        trimmed(out.into_iter().map(|c| c as u8).collect())
    }

    /// Returns (quotient, remainder); `b` must be nonzero.
    pub fn divrem(q: u32, a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let b = trimmed(b.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = trimmed(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = inv_mod_q(q, *b.last().unwrap()) as u32;
        let mut quot = vec![0u8; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = (*r.last().unwrap() as u32 * lead_inv) % q;
            quot[shift] = c as u8;
            for (j, &bj) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = ((r[idx] as u32 + q * q - c * bj as u32) % q) as u8;
            }
            r = trimmed(r);
        }
        (trimmed(quot), r)
    }

    pub fn gcd(q: u32, a: &[u8], b: &[u8]) -> Vec<u8> {
        let (mut x, mut y) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
        while !y.is_empty() {
            let (_, r) = divrem(q, &x, &y);
            x = y;
            y = r;
        }
        x
    }

    /// Inverse of `a` modulo the irreducible `f`.
    pub fn inverse_mod(q: u32, a: &[u8], f: &[u8]) -> Vec<u8> {
        let (mut r0, mut r1) = (trimmed(f.to_vec()), trimmed(a.to_vec()));
        let (mut s0, mut s1): (Vec<u8>, Vec<u8>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = divrem(q, &r0, &r1);
            let s2 = sub(q, &s0, &mul(q, &quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant; normalise
        let c = inv_mod_q(q, r0[0]) as u32;
        let s: Vec<u8> = s0.iter().map(|&x| ((x as u32 * c) % q) as u8).collect();
        divrem(q, &s, f).1
    }

    fn mulmod(q: u32, a: &[u8], b: &[u8], f: &[u8]) -> Vec<u8> {
        divrem(q, &mul(q, a, b), f).1
    }

    fn powmod(q: u32, a: &[u8], mut e: u64, f: &[u8]) -> Vec<u8> {
        let mut base = divrem(q, a, f).1;
        let mut acc = vec![1u8];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(q, &acc, &base, f);
            }
            base = mulmod(q, &base, &base, f);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or irreducibility test for a monic `f`.
    pub fn is_irreducible(q: u32, f: &[u8]) -> bool {
        let f = trimmed(f.to_vec());
        let deg = match f.len() {
            0 | 1 => return false,
            n => n - 1,
        };
        if deg == 1 {
            return true;
        }
        let x = vec![0u8, 1];
        let mut h = x.clone();
        for _ in 1..=deg / 2 {
            h = powmod(q, &h, q as u64, &f);
            let g = gcd(q, &sub(q, &h, &x), &f);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
