//! Exact scalars, parities, and the coefficient-ring abstraction shared by
//! supermatrices over the rationals and over Grassmann algebras.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Lowest-terms text form, `n` or `n/d`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Element of Z/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: usize) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// (-1)^(self * other) as +1/-1.
    pub fn sign_with(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A supercommutative coefficient ring with an explicit context (the
/// Grassmann degree bound for Λ(N), nothing for the rationals).
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, x: &Rational) -> Self;
    fn ctx(&self) -> Self::Ctx;

    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, x: &Rational) -> Self;
    fn vanishes(&self) -> bool;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    /// True when every term of `self` has the given parity (zero passes).
    fn has_parity(&self, p: Parity) -> bool;

    /// λ ↦ λ₀ − λ₁: negate the odd component.
    fn grade_involution(&self) -> Self;

    /// Degree-zero (scalar) component.
    fn augmentation(&self) -> Rational;

    fn try_invert(&self) -> Result<Self>;

    /// Nilpotency degree bound for elements with zero augmentation; the
    /// rationals report 1 (only 0 has zero augmentation).
    fn nilpotency_bound(ctx: &Self::Ctx) -> usize;

    fn to_text(&self) -> String;
}

impl Coefficient for Rational {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(_: &(), x: &Rational) -> Self {
        x.clone()
    }
    fn ctx(&self) {}
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, x: &Rational) -> Self {
        self * x
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn has_parity(&self, p: Parity) -> bool {
        p == Parity::Even || Zero::is_zero(self)
    }
    fn grade_involution(&self) -> Self {
        self.clone()
    }
    fn augmentation(&self) -> Rational {
        self.clone()
    }
    fn try_invert(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }
    fn nilpotency_bound(_: &()) -> usize {
        1
    }
    fn to_text(&self) -> String {
        fmt_rational(self)
    }
}

/// Least common multiple of the denominators, for clearing a rational row.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = num_integer::Integer::lcm(&l, x.denom());
    }
    l
}
