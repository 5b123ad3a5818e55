//! Scalar fields.
//!
//! Linear algebra in this crate is written against the [`Field`] trait, which
//! carries its own context so that the modulus of a prime field can be chosen
//! at runtime. Two implementations are provided: [`PrimeField`] for the
//! codes themselves and [`ExactField`], a blanket wrapper over any exact
//! `num-traits` number type (rationals in practice), used to cross-check the
//! elimination routines over a second field.

use std::fmt;
use std::marker::PhantomData;
use std::ops::Neg;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field whose elements are plain values and whose operations go through
/// a context object.
pub trait Field {
    type Elem: Copy + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// An element of a prime field, always reduced into `[0, q)`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fp(u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The binary operations exposed by [`PrimeField::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The prime field `F_q` for a runtime prime `q < 2^31`.
///
/// Optionally carries a shared operation counter; when present every
/// arithmetic call bumps it by one.
#[derive(Clone, Debug)]
pub struct PrimeField {
    q: u32,
    counter: Option<Arc<AtomicU64>>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for PrimeField {}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q >= 1 << 31 {
            return Err(Error::BadParams(format!("modulus {q} exceeds 2^31")));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField {
            q: q as u32,
            counter: None,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q as u64
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, x: u64) -> Fp {
        Fp((x % self.q as u64) as u32)
    }

    /// Reduces a signed integer into the field.
    pub fn elem_signed(&self, x: i64) -> Fp {
        Fp(x.rem_euclid(self.q as i64) as u32)
    }

    /// Returns a copy of this field that counts its operations in a fresh
    /// counter.
    pub fn with_op_counter(&self) -> Self {
        PrimeField {
            q: self.q,
            counter: Some(Arc::new(AtomicU64::new(0))),
        }
    }

    /// Operations performed so far, if counting is enabled.
    pub fn op_count(&self) -> Option<u64> {
        self.counter.as_ref().map(|c| c.load(Ordering::Relaxed))
    }

    #[inline]
    fn tick(&self) {
        if let Some(c) = &self.counter {
            c.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn apply(&self, op: ArithOp, a: Fp, b: Fp) -> Result<Fp> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn pow(&self, base: Fp, mut exp: u64) -> Fp {
        let q = self.q as u64;
        let mut acc = 1u64;
        let mut b = base.0 as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            exp >>= 1;
        }
        Fp(acc as u32)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fp) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.q as u64 - 1;
        let mut order = group;
        for p in prime_factors(group) {
            while order % p == 0 && self.pow(a, order / p) == Fp::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    /// All `q` elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = Fp> {
        (0..self.q).map(Fp)
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    #[inline]
    fn zero(&self) -> Fp {
        Fp::ZERO
    }

    #[inline]
    fn one(&self) -> Fp {
        Fp::ONE
    }

    #[inline]
    fn add(&self, a: Fp, b: Fp) -> Fp {
        self.tick();
        let s = a.0 + b.0;
        Fp(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    fn sub(&self, a: Fp, b: Fp) -> Fp {
        self.tick();
        Fp(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.q - b.0
        })
    }

    #[inline]
    fn mul(&self, a: Fp, b: Fp) -> Fp {
        self.tick();
        Fp((a.0 as u64 * b.0 as u64 % self.q as u64) as u32)
    }

    #[inline]
    fn neg(&self, a: Fp) -> Fp {
        self.tick();
        Fp(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    fn inv(&self, a: Fp) -> Option<Fp> {
        self.tick();
        if a.0 == 0 {
            return None;
        }
        // extended Euclid on (q, a)
        let (mut r0, mut r1) = (self.q as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(Fp(t0.rem_euclid(self.q as i64) as u32))
    }

    #[inline]
    fn is_zero(&self, a: Fp) -> bool {
        a.0 == 0
    }
}

/// Any exact `num-traits` number type viewed as a field.
///
/// Meant for `Ratio<_>`-like types. Floating types satisfy the bounds too but
/// elimination over them is not exact.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactField<T>(PhantomData<T>);

impl<T> ExactField<T> {
    pub fn new() -> Self {
        ExactField(PhantomData)
    }
}

impl<T> Field for ExactField<T>
where
    T: num_traits::Num + Copy + Neg<Output = T> + fmt::Debug,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn add(&self, a: T, b: T) -> T {
        a + b
    }
    fn sub(&self, a: T, b: T) -> T {
        a - b
    }
    fn mul(&self, a: T, b: T) -> T {
        a * b
    }
    fn neg(&self, a: T) -> T {
        -a
    }
    fn inv(&self, a: T) -> Option<T> {
        if a.is_zero() {
            None
        } else {
            Some(T::one() / a)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of the multiplicative group of `F_q`.
pub fn primitive_element(q: u64) -> Result<Fp> {
    if q < 3 {
        return Err(Error::BadParams(format!("primitive element needs q >= 3, got {q}")));
    }
    let field = PrimeField::new(q)?;
    let group = q - 1;
    let factors = prime_factors(group);
    (2..q)
        .map(|g| field.elem(g))
        .find(|&g| factors.iter().all(|&p| field.pow(g, group / p) != Fp::ONE))
        .ok_or(Error::NotPrime(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f17() -> PrimeField {
        PrimeField::new(17).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f = f17();
        assert_eq!(f.apply(ArithOp::Add, f.elem(5), f.elem(13)).unwrap(), f.elem(1));
        assert_eq!(f.apply(ArithOp::Mul, f.elem(0), f.elem(9)).unwrap(), Fp::ZERO);
        // 3 * x = 1 mod 17 by enumeration
        let inv3 = (0..17u64).find(|x| 3 * x % 17 == 1).unwrap();
        assert_eq!(inv3, 6);
        assert_eq!(f.apply(ArithOp::Div, f.elem(1), f.elem(3)).unwrap(), f.elem(inv3));
        assert!(matches!(
            f.apply(ArithOp::Div, f.elem(4), Fp::ZERO),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if a != Fp::ZERO {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fp::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Fp::ZERO);
            }
        }
    }

    #[test]
    fn axioms_mod_31() {
        let f = PrimeField::new(31).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.sub(f.add(a, b), b), a);
                for c in f.elements().step_by(3) {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    fn order_by_enumeration(q: u64, g: u64) -> u64 {
        let mut x = g % q;
        let mut t = 1;
        while x != 1 {
            x = x * g % q;
            t += 1;
        }
        t
    }

    #[test]
    fn primitive_element_examples() {
        assert_eq!(primitive_element(17).unwrap().value(), 3);
        assert_eq!(order_by_enumeration(17, 3), 16);
        assert_eq!(primitive_element(5).unwrap().value(), 2);
        assert!(matches!(primitive_element(16), Err(Error::NotPrime(16))));
    }

    #[test]
    fn primitive_element_is_smallest_generator() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 61, 127, 257] {
            let g = primitive_element(q).unwrap().value() as u64;
            assert_eq!(order_by_enumeration(q, g), q - 1, "q={q}");
            for smaller in 2..g {
                assert!(order_by_enumeration(q, smaller) < q - 1);
            }
            let f = PrimeField::new(q).unwrap();
            let mut powers: Vec<Fp> = (0..q - 1).map(|t| f.pow(f.elem(g), t)).collect();
            powers.sort();
            powers.dedup();
            assert_eq!(powers.len() as u64, q - 1);
        }
    }

    #[test]
    fn multiplicative_order_matches_enumeration() {
        let f = PrimeField::new(31).unwrap();
        for a in 1..31u64 {
            assert_eq!(f.multiplicative_order(f.elem(a)).unwrap(), order_by_enumeration(31, a));
        }
    }

    #[test]
    fn op_counter_counts() {
        let f = f17().with_op_counter();
        f.add(Fp::ONE, Fp::ONE);
        f.mul(Fp::ONE, Fp::ONE);
        assert_eq!(f.op_count(), Some(2));
        assert_eq!(f17().op_count(), None);
    }

    #[test]
    fn rejects_composites() {
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(PrimeField::new(91), Err(Error::NotPrime(91))));
    }
}
