//! The rank-10 numerical Picard lattice of the blown-up ruled surface.
//!
//! Basis: `C` (pullback of the elliptic section `C_o`), `F` (pullback of a
//! fiber), the four exceptional curves `s_i` over the points of `C_o` and the
//! four exceptional curves `r_i` over the other fixed points. The form is the
//! hyperbolic plane on `(C, F)` plus `-1` on each exceptional curve.
//!
//! Classes on the rational quotient are handled through their pullbacks; see
//! [`QuotientClass`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A numerical divisor class `c*C + f*F + sum s_i*s_i + sum r_i*r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DivisorClass {
    pub c: BigInt,
    pub f: BigInt,
    pub s: [BigInt; 4],
    pub r: [BigInt; 4],
}

impl DivisorClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(c: impl Into<BigInt>, f: impl Into<BigInt>, s: [i64; 4], r: [i64; 4]) -> Self {
        DivisorClass {
            c: c.into(),
            f: f.into(),
            s: s.map(BigInt::from),
            r: r.map(BigInt::from),
        }
    }

    /// `C = e*(C_o)`.
    pub fn section() -> Self {
        Self::new(1, 0, [0; 4], [0; 4])
    }

    /// `F = e*(fiber)`; every fiber `S_i` has this numerical class.
    pub fn fiber() -> Self {
        Self::new(0, 1, [0; 4], [0; 4])
    }

    /// The exceptional curve `s_i`.
    pub fn s_exc(i: usize) -> Self {
        let mut d = Self::zero();
        d.s[i] = BigInt::from(1);
        d
    }

    /// The exceptional curve `r_i`.
    pub fn r_exc(i: usize) -> Self {
        let mut d = Self::zero();
        d.r[i] = BigInt::from(1);
        d
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.f.is_zero() && self.s.iter().all(Zero::is_zero) && self.r.iter().all(Zero::is_zero)
    }

    /// Intersection pairing.
    pub fn dot(&self, other: &DivisorClass) -> BigInt {
        let mut v = &self.c * &other.f + &self.f * &other.c;
        for i in 0..4 {
            v -= &self.s[i] * &other.s[i];
            v -= &self.r[i] * &other.r[i];
        }
        v
    }

    pub fn self_intersection(&self) -> BigInt {
        self.dot(self)
    }

    /// Adjunction genus `1 + (D.D + D.K)/2`. May be negative.
    pub fn arithmetic_genus(&self) -> BigInt {
        let twice = self.self_intersection() + self.dot(&canonical_class());
        debug_assert!(twice.is_even());
        BigInt::from(1) + twice / 2
    }
}

/// Intersection number of two classes.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> BigInt {
    a.dot(b)
}

/// `K = -2C + sum_i (s_i + r_i)`.
pub fn canonical_class() -> DivisorClass {
    DivisorClass::new(-2, 0, [1; 4], [1; 4])
}

pub fn arithmetic_genus(d: &DivisorClass) -> BigInt {
    d.arithmetic_genus()
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl<'a> Add<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            c: &self.c + &rhs.c,
            f: &self.f + &rhs.f,
            s: std::array::from_fn(|i| &self.s[i] + &rhs.s[i]),
            r: std::array::from_fn(|i| &self.r[i] + &rhs.r[i]),
        }
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl<'a> Sub<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            c: -&self.c,
            f: -&self.f,
            s: std::array::from_fn(|i| -&self.s[i]),
            r: std::array::from_fn(|i| -&self.r[i]),
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for &BigInt {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass {
            c: self * &d.c,
            f: self * &d.f,
            s: std::array::from_fn(|i| self * &d.s[i]),
            r: std::array::from_fn(|i| self * &d.r[i]),
        }
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        &BigInt::from(self) * &d
    }
}

impl std::iter::Sum for DivisorClass {
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> Self {
        iter.fold(DivisorClass::zero(), |a, b| a + b)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format(self))
    }
}

struct Coeff<'a>(&'a BigInt);

impl Serialize for Coeff<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => ser.serialize_i64(v),
            None => ser.serialize_str(&self.0.to_string()),
        }
    }
}

// Coefficients serialize as JSON numbers when they fit in i64, as decimal
// strings otherwise.
impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("DivisorClass", 5)?;
        st.serialize_field("c", &Coeff(&self.c))?;
        st.serialize_field("f", &Coeff(&self.f))?;
        st.serialize_field("s", &self.s.each_ref().map(Coeff))?;
        st.serialize_field("r", &self.r.each_ref().map(Coeff))?;
        st.serialize_field("expr", &crate::expr::format(self))?;
        st.end()
    }
}

/// A class on the quotient surface, stored as its pullback.
///
/// Pairings are half the pairing of the pullbacks; an odd pullback pairing
/// means at least one operand is not a genuine pullback.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QuotientClass {
    pub pullback: DivisorClass,
}

impl QuotientClass {
    pub fn from_pullback(pullback: DivisorClass) -> Self {
        QuotientClass { pullback }
    }

    /// The canonical class of the quotient; its pullback is `-2C`.
    pub fn canonical() -> Self {
        Self::from_pullback(DivisorClass::new(-2, 0, [0; 4], [0; 4]))
    }

    pub fn dot(&self, other: &QuotientClass) -> Result<BigInt> {
        let v = self.pullback.dot(&other.pullback);
        if v.is_odd() {
            return Err(Error::OddPairing { value: v.to_string() });
        }
        Ok(v / 2)
    }

    pub fn self_intersection(&self) -> Result<BigInt> {
        self.dot(self)
    }

    pub fn genus(&self) -> Result<BigInt> {
        let twice = self.self_intersection()? + self.dot(&Self::canonical())?;
        if twice.is_odd() {
            return Err(Error::OddPairing {
                value: twice.to_string(),
            });
        }
        Ok(BigInt::from(1) + twice / 2)
    }
}

impl Sub<&QuotientClass> for &QuotientClass {
    type Output = QuotientClass;
    fn sub(self, rhs: &QuotientClass) -> QuotientClass {
        QuotientClass::from_pullback(&self.pullback - &rhs.pullback)
    }
}

pub fn quotient_intersect(a: &QuotientClass, b: &QuotientClass) -> Result<BigInt> {
    a.dot(b)
}

pub fn quotient_genus(a: &QuotientClass) -> Result<BigInt> {
    a.genus()
}
