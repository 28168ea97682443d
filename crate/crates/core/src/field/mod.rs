//! Odd-order finite fields F_q = F_p[x]/(m(x)).
//!
//! Elements are addressed by a code in `0..q`: the base-p digits of the code
//! are the polynomial coefficients, constant term first. Code 0 is the
//! additive identity and code 1 the multiplicative identity.

mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_CAP;

/// Extension fields up to this order get precomputed operation tables.
pub const TABLE_THRESHOLD: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub(crate) fn from_code_unchecked(code: u32) -> Self {
        FieldElement(code)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Builds F_{p^k} with the default size cap.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec> {
    make_field_with_cap(p, k, DEFAULT_CAP)
}

pub fn make_field_with_cap(p: u64, k: u32, cap: u64) -> Result<FieldSpec> {
    if k == 0 {
        return Err(Error::InvalidDegree);
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > cap as u128 || q > u32::MAX as u128 {
        return Err(Error::SizeCapExceeded { size: q, cap });
    }
    let (p, q) = (p as u32, q as u32);
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, k)
    };
    let mut field = FieldSpec { p, k, q, modulus, tables: None };
    if k > 1 && q <= TABLE_THRESHOLD {
        field.tables = Some(field.build_tables());
    }
    Ok(field)
}

/// Smallest monic irreducible of degree k, comparing the coefficient
/// sequence from the constant term upward.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for rank in 0..count {
        // The constant term is the most significant position of the ordering.
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut r = rank;
        for i in (0..k as usize).rev() {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] != 0 && poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Modulus coefficients, constant term first; monic of degree k.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code >= self.q as u64 {
            return Err(Error::CodeOutOfRange { code, q: self.q });
        }
        Ok(FieldElement(code as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        self.decode(a.0)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() > self.k as usize {
            return Err(Error::InvalidParam(format!(
                "{} coefficients given for a degree-{} field",
                digits.len(),
                self.k
            )));
        }
        if let Some(&bad) = digits.iter().find(|&&c| c >= self.p) {
            return Err(Error::CodeOutOfRange { code: bad as u64, q: self.p });
        }
        Ok(FieldElement(self.encode(digits)))
    }

    fn decode(&self, mut code: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(code % self.p);
            code /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_code(a.0, b.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.sub_code(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_code(a.0))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_code(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            return Ok(FieldElement(t.inv[a.0 as usize] as u32));
        }
        Ok(FieldElement(self.inv_slow(a.0)))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a.0;
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_code(acc, base);
            }
            base = self.mul_code(base, base);
            exp >>= 1;
        }
        FieldElement(acc)
    }

    /// Absolute trace a + a^p + ... + a^(p^(k-1)); the result lies in F_p.
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        let mut acc = 0u32;
        let mut conj = a;
        for _ in 0..self.k {
            acc = self.add_code(acc, conj.0);
            conj = self.pow(conj, self.p as u64);
        }
        debug_assert!(acc < self.p, "trace left the prime subfield");
        FieldElement(acc)
    }

    #[inline]
    pub(crate) fn add_code(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if let Some(t) = &self.tables {
            return t.add[(a * self.q + b) as usize] as u32;
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub(crate) fn neg_code(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        if let Some(t) = &self.tables {
            return t.neg[a as usize] as u32;
        }
        let digits: Vec<u32> = self.decode(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.encode(&digits)
    }

    #[inline]
    pub(crate) fn sub_code(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return if a >= b { a - b } else { a + self.p - b };
        }
        self.add_code(a, self.neg_code(b))
    }

    #[inline]
    pub(crate) fn mul_code(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        if let Some(t) = &self.tables {
            return t.mul[(a * self.q + b) as usize] as u32;
        }
        self.mul_poly(a, b)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let pa = poly::trim(self.decode(a));
        let pb = poly::trim(self.decode(b));
        self.encode(&poly::mul_mod(&pa, &pb, &self.modulus, self.p))
    }

    fn inv_slow(&self, a: u32) -> u32 {
        if self.k == 1 {
            return poly::inv_mod_p(a, self.p);
        }
        let pa = poly::trim(self.decode(a));
        let inv = poly::inv_mod(&pa, &self.modulus, self.p)
            .expect("nonzero element of a field is invertible");
        self.encode(&inv)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..self.q {
            for b in 0..self.q {
                let idx = a as usize * q + b as usize;
                add[idx] = self.add_digits(a, b) as u16;
                mul[idx] = self.mul_poly(a, b) as u16;
            }
        }
        let neg = (0..self.q)
            .map(|a| {
                let digits: Vec<u32> =
                    self.decode(a).into_iter().map(|c| (self.p - c) % self.p).collect();
                self.encode(&digits) as u16
            })
            .collect();
        let mut inv = vec![0u16; q];
        for a in 1..q {
            let row = &mul[a * q..(a + 1) * q];
            let b = row.iter().position(|&v| v == 1).expect("every nonzero element has an inverse");
            inv[a] = b as u16;
        }
        Tables { add, mul, neg, inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldSpec, c: u64) -> FieldElement {
        f.element(c).unwrap()
    }

    #[test]
    fn prime_field_f3() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.add(el(&f, 2), el(&f, 2)), el(&f, 1));
        assert_eq!(f.mul(el(&f, 2), el(&f, 2)), el(&f, 1));
        assert_eq!(f.inv(el(&f, 2)).unwrap(), el(&f, 2));
        assert_eq!(f.trace(el(&f, 2)), el(&f, 2));
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f9_modulus_and_arithmetic() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let x = f.from_digits(&[0, 1]).unwrap();
        let two_x = f.from_digits(&[0, 2]).unwrap();
        assert_eq!(f.add(x, two_x), FieldElement::ZERO);
        assert_eq!(f.mul(x, x), el(&f, 2));
        assert_eq!(f.inv(x).unwrap(), two_x);
        assert_eq!(f.trace(x), FieldElement::ZERO);
        assert_eq!(f.trace(FieldElement::ONE), el(&f, 2));
    }

    #[test]
    fn modulus_ordering_starts_from_constant_term() {
        // Over F_5, x^2 + 1 splits; the next candidate with constant 1 is x^2 + x + 1.
        let f = make_field(5, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let f = make_field(3, 3).unwrap();
        assert!(poly::is_irreducible(f.modulus(), 3));
        assert_eq!(f.modulus()[0], 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(2, 3).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(make_field(9, 1).unwrap_err(), Error::NotPrime(9));
        assert_eq!(make_field(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::InvalidDegree);
        assert!(matches!(
            make_field_with_cap(3, 5, 100),
            Err(Error::SizeCapExceeded { size: 243, cap: 100 })
        ));
        assert_eq!(make_field(3, 1).unwrap().inv(FieldElement::ZERO), Err(Error::DivisionByZero));
        assert!(make_field(3, 1).unwrap().element(3).is_err());
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        let with = make_field(7, 2).unwrap();
        let mut without = with.clone();
        without.tables = None;
        for a in with.elements() {
            for b in with.elements() {
                assert_eq!(with.add(a, b), without.add(a, b));
                assert_eq!(with.mul(a, b), without.mul(a, b));
            }
            assert_eq!(with.neg(a), without.neg(a));
            if a != FieldElement::ZERO {
                assert_eq!(with.inv(a), without.inv(a));
            }
        }
    }

    #[test]
    fn large_extension_without_tables() {
        let f = make_field(5, 6).unwrap();
        assert!(!f.has_tables());
        let a = el(&f, 12345);
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv), FieldElement::ONE);
        assert_eq!(f.pow(a, f.order() as u64 - 1), FieldElement::ONE);
    }
}
