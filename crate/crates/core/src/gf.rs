//! Table-driven arithmetic in small finite fields `F_q`, `q = p^e <= 256`.
//!
//! Elements are identified by their index in a fixed enumeration
//! `γ_0 = 0, γ_i = α^(i-1)` where `α` is the primitive element of the field.
//! For extension fields `α` is the class of `x` modulo the canonical modulus;
//! for prime fields it is the least primitive root mod `p`. Multiplication is
//! therefore addition of indices modulo `q - 1`, and addition goes through a
//! `q x q` table built from the polynomial-basis representation.
//!
//! Canonical moduli are the monic primitive polynomials of degree `e` over
//! `F_p` with the smallest integer encoding `Σ c_i p^i`. This yields
//! `x^2+x+1` (F_4), `x^3+x+1` (F_8), `x^2+x+2` (F_9) and `x^4+x+1` (F_16).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: usize = 256;

/// An element of `F_q`, stored as its index in the canonical enumeration.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_q` with its canonical enumeration and lookup tables.
///
/// Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    q: usize,
    p: usize,
    e: usize,
    /// Monic modulus, coefficients low to high (`e + 1` entries); `None` for prime fields.
    modulus: Option<Vec<u8>>,
    /// index -> polynomial-basis integer encoding `Σ c_i p^i`
    repr: Vec<u8>,
    /// polynomial-basis integer encoding -> index
    index_of: Vec<u8>,
    add: Vec<u8>,
    neg: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n.is_multiple_of(*d))
}

/// Multiplies the base-`p` digit vector `poly` (degree < e) by `x` modulo the monic `modulus`.
fn mul_by_x(poly: &mut [u8], modulus: &[u8], p: usize) {
    let e = poly.len();
    let top = poly[e - 1] as usize;
    for i in (1..e).rev() {
        poly[i] = poly[i - 1];
    }
    poly[0] = 0;
    if top != 0 {
        // x^e = -(m_0 + m_1 x + ... + m_{e-1} x^{e-1})
        for i in 0..e {
            let sub = (top * modulus[i] as usize) % p;
            poly[i] = ((poly[i] as usize + p - sub) % p) as u8;
        }
    }
}

fn encode_digits(digits: &[u8], p: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d as usize)
}

fn decode_digits(mut value: usize, p: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = value % p;
            value /= p;
            d as u8
        })
        .collect()
}

/// Successive powers `x^0, x^1, ..., x^(q-1)` modulo `modulus`, as integer encodings.
fn powers_of_x(modulus: &[u8], p: usize, e: usize, q: usize) -> Vec<usize> {
    let mut cur = vec![0u8; e];
    cur[0] = 1;
    let mut out = Vec::with_capacity(q);
    for _ in 0..q {
        out.push(encode_digits(&cur, p));
        if e == 1 {
            // degree-1 modulus x - a: multiplying by x is multiplying by a
            let a = (p - modulus[0] as usize) % p;
            cur[0] = ((cur[0] as usize * a) % p) as u8;
        } else {
            mul_by_x(&mut cur, modulus, p);
        }
    }
    out
}

/// `x` has multiplicative order exactly `q - 1`.
fn generates(powers: &[usize], q: usize) -> bool {
    powers[q - 1] == 1 && proper_divisors(q - 1).all(|d| powers[d] != 1)
}

fn pinned_modulus(q: usize) -> Option<Vec<u8>> {
    match q {
        4 => Some(vec![1, 1, 1]),
        8 => Some(vec![1, 1, 0, 1]),
        9 => Some(vec![2, 1, 1]),
        16 => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

/// Smallest (by integer encoding) monic degree-`e` polynomial over `F_p` whose root generates `F_q^*`.
fn search_modulus(p: usize, e: usize, q: usize) -> Option<Vec<u8>> {
    (0..q).find_map(|low| {
        let mut modulus = decode_digits(low, p, e);
        modulus.push(1);
        let powers = powers_of_x(&modulus, p, e, q);
        generates(&powers, q).then_some(modulus)
    })
}

impl FieldSpec {
    /// Builds `F_q` with its canonical modulus and enumeration.
    pub fn new(q: usize) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::Parameter(format!(
                "field order {q} exceeds {MAX_ORDER}"
            )));
        }
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::Parameter(format!("field order {q} is not a prime power")))?;

        // prime fields are handled as F_p[x]/(x - a) for the least primitive root a
        let modulus = if e == 1 {
            (1..p)
                .map(|a| vec![((p - a) % p) as u8, 1])
                .find(|m| generates(&powers_of_x(m, p, 1, q), q))
        } else {
            pinned_modulus(q).or_else(|| search_modulus(p, e, q))
        }
        .ok_or_else(|| Error::Parameter(format!("no primitive modulus found for q={q}")))?;

        let powers = powers_of_x(&modulus, p, e, q);
        if !generates(&powers, q) {
            return Err(Error::Parameter(format!(
                "modulus for q={q} is not primitive"
            )));
        }

        let mut repr = vec![0u8; q];
        let mut index_of = vec![0u8; q];
        let mut seen = vec![false; q];
        seen[0] = true;
        for i in 1..q {
            let v = powers[i - 1];
            if seen[v] {
                return Err(Error::Parameter(format!(
                    "enumeration of F_{q} is not a bijection"
                )));
            }
            seen[v] = true;
            repr[i] = v as u8;
            index_of[v] = i as u8;
        }

        let digits: Vec<Vec<u8>> = (0..q).map(|v| decode_digits(v, p, e)).collect();
        let mut add = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for a in 0..q {
            let da = &digits[repr[a] as usize];
            for b in 0..q {
                let db = &digits[repr[b] as usize];
                let sum: Vec<u8> = da
                    .iter()
                    .zip(db)
                    .map(|(x, y)| ((*x as usize + *y as usize) % p) as u8)
                    .collect();
                add[a * q + b] = index_of[encode_digits(&sum, p)];
            }
            let minus: Vec<u8> = da.iter().map(|x| ((p - *x as usize) % p) as u8).collect();
            neg[a] = index_of[encode_digits(&minus, p)];
        }

        Ok(FieldSpec {
            q,
            p,
            e,
            modulus: (e > 1).then_some(modulus),
            repr,
            index_of,
            add,
            neg,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    /// Coefficients of the modulus, low to high. `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u8]> {
        self.modulus.as_deref()
    }

    /// The primitive element `α = γ_2` (equal to `1` in `F_2`).
    pub fn alpha(&self) -> FieldElement {
        self.exp(1)
    }

    /// `γ_i`, the i-th element of the canonical enumeration.
    pub fn gamma(&self, i: usize) -> FieldElement {
        assert!(
            i < self.q,
            "enumeration index {i} out of range for F_{}",
            self.q
        );
        FieldElement(i as u8)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| FieldElement(i as u8))
    }

    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u8))
        } else {
            Err(Error::Parameter(format!(
                "symbol {index} is not an element of F_{}",
                self.q
            )))
        }
    }

    /// Polynomial-basis integer encoding `Σ c_i p^i` of `a` (the residue itself for prime fields).
    pub fn repr(&self, a: FieldElement) -> usize {
        self.repr[a.index()] as usize
    }

    /// Inverse of [`FieldSpec::repr`].
    pub fn from_repr(&self, value: usize) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(self.index_of[value]))
        } else {
            Err(Error::Parameter(format!(
                "{value} is not a representation in F_{}",
                self.q
            )))
        }
    }

    /// `α^i`.
    #[inline]
    pub fn exp(&self, i: usize) -> FieldElement {
        FieldElement((1 + i % (self.q - 1)) as u8)
    }

    /// Discrete logarithm base `α`; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| a.index() - 1)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let s = (a.index() - 1) + (b.index() - 1);
        FieldElement((1 + s % (self.q - 1)) as u8)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        match self.log(a) {
            None => Err(Error::Domain("inverse of zero".into())),
            Some(l) => Ok(self.exp((self.q - 1 - l) % (self.q - 1))),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, n: usize) -> FieldElement {
        match self.log(a) {
            _ if n == 0 => FieldElement::ONE,
            None => FieldElement::ZERO,
            Some(l) => self.exp((l * n) % (self.q - 1)),
        }
    }

    /// `a * x + y`
    #[inline]
    pub fn mul_add(&self, a: FieldElement, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(self.mul(a, x), y)
    }

    /// Horner evaluation of `Σ coeffs[i] x^i`.
    pub fn poly_eval(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.mul_add(acc, x, c))
    }

    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, items: I) -> FieldElement {
        items
            .into_iter()
            .fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_orders() -> Vec<usize> {
        (2..=MAX_ORDER)
            .filter(|&q| prime_power(q).is_some())
            .collect()
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12, 15, 100, 255, 257, 512] {
            assert!(FieldSpec::new(q).is_err(), "q={q}");
        }
    }

    #[test]
    fn canonical_moduli() {
        let f8 = FieldSpec::new(8).unwrap();
        assert_eq!((f8.characteristic(), f8.degree()), (2, 3));
        assert_eq!(f8.modulus(), Some(&[1, 1, 0, 1][..]));
        assert_eq!(FieldSpec::new(4).unwrap().modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(FieldSpec::new(9).unwrap().modulus(), Some(&[2, 1, 1][..]));
        assert_eq!(
            FieldSpec::new(16).unwrap().modulus(),
            Some(&[1, 1, 0, 0, 1][..])
        );

        let f7 = FieldSpec::new(7).unwrap();
        assert_eq!((f7.characteristic(), f7.degree()), (7, 1));
        assert_eq!(f7.modulus(), None);
        // 3 is the least primitive root mod 7
        assert_eq!(f7.repr(f7.alpha()), 3);
    }

    #[test]
    fn search_agrees_with_pinned_moduli() {
        for q in [4, 8, 9, 16] {
            let (p, e) = prime_power(q).unwrap();
            assert_eq!(search_modulus(p, e, q), pinned_modulus(q), "q={q}");
        }
    }

    #[test]
    fn f8_examples() {
        let f = FieldSpec::new(8).unwrap();
        let a = f.alpha();
        assert_eq!(f.mul(a, f.exp(6)), FieldElement::ONE);
        assert_eq!(f.pow(a, 7), FieldElement::ONE);
        // α^3 = α + 1 under x^3 + x + 1
        assert_eq!(f.exp(3), f.add(a, FieldElement::ONE));
        // 1 + α + α^2 via Horner
        let one = FieldElement::ONE;
        let expected = f.add(f.add(one, a), f.exp(2));
        assert_eq!(f.poly_eval(&[one, one, one], a), expected);
        assert_eq!(f.repr(expected), 0b111);
    }

    #[test]
    fn f7_inverse() {
        let f = FieldSpec::new(7).unwrap();
        // as enumeration indices
        assert_eq!(f.inv(FieldElement(3)).unwrap(), FieldElement(5));
        // as residues: 3 * 5 = 15 = 1 mod 7
        let three = f.from_repr(3).unwrap();
        assert_eq!(f.repr(f.inv(three).unwrap()), 5);
        assert!(matches!(f.inv(FieldElement::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn prime_field_matches_modular_arithmetic() {
        for q in [2, 3, 5, 7, 11, 13, 31, 251] {
            let f = FieldSpec::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let (ra, rb) = (f.repr(a), f.repr(b));
                    assert_eq!(f.repr(f.add(a, b)), (ra + rb) % q);
                    assert_eq!(f.repr(f.mul(a, b)), (ra * rb) % q);
                }
            }
        }
    }

    #[test]
    fn characteristic_two_self_inverse_addition() {
        for q in [2, 4, 8, 16, 32, 64, 128, 256] {
            let f = FieldSpec::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, a), FieldElement::ZERO);
                assert_eq!(f.neg(a), a);
            }
        }
    }

    #[test]
    fn poly_eval_small_cases() {
        let f = FieldSpec::new(5).unwrap();
        for x in f.elements() {
            assert_eq!(f.poly_eval(&[FieldElement(3)], x), FieldElement(3));
            assert_eq!(f.poly_eval(&[FieldElement::ZERO, FieldElement::ONE], x), x);
            assert_eq!(f.poly_eval(&[], x), FieldElement::ZERO);
        }
    }

    fn check_axioms(
        f: &FieldSpec,
        triples: impl Iterator<Item = (FieldElement, FieldElement, FieldElement)>,
    ) {
        for (a, b, c) in triples {
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in all_orders().into_iter().filter(|&q| q <= 16) {
            let f = FieldSpec::new(q).unwrap();
            let elems: Vec<_> = f.elements().collect();
            let mut triples = Vec::with_capacity(q * q * q);
            for &a in &elems {
                for &b in &elems {
                    for &c in &elems {
                        triples.push((a, b, c));
                    }
                }
            }
            check_axioms(&f, triples.into_iter());
            for &a in &elems {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for q in all_orders().into_iter().filter(|&q| q > 16) {
            let f = FieldSpec::new(q).unwrap();
            let mut pick = || FieldElement(rng.random_range(0..q) as u8);
            let triples: Vec<_> = (0..2000).map(|_| (pick(), pick(), pick())).collect();
            check_axioms(&f, triples.into_iter());
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE, "q={q}");
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            }
        }
    }

    #[test]
    fn exp_log_round_trip() {
        for q in all_orders() {
            let f = FieldSpec::new(q).unwrap();
            for i in 0..2 * q {
                assert_eq!(f.log(f.exp(i)), Some(i % (q - 1)));
            }
            assert_eq!(f.log(FieldElement::ZERO), None);
            // enumeration is a bijection onto the representations
            let mut reprs: Vec<_> = f.elements().map(|a| f.repr(a)).collect();
            reprs.sort_unstable();
            assert_eq!(reprs, (0..q).collect::<Vec<_>>());
        }
    }
}
