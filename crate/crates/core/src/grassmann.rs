//! The finite-degree Grassmann algebra Λ(N).
//!
//! Basis monomials θ^S are indexed by subsets S ⊆ {1..N}, stored as bitmasks
//! (bit i-1 set when θ_i occurs), which is the canonical strictly increasing
//! encoding. Products pick up the sign of the merge permutation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, parse_rational, Coefficient, Parity, Rational};

pub const MAX_DEGREE_BOUND: u32 = 63;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrassmannElt {
    degree_bound: u32,
    terms: BTreeMap<u64, Rational>,
}

/// Sign of θ^S θ^T rewritten as ±θ^{S∪T}, or `None` when S ∩ T ≠ ∅.
pub fn merge_sign(s: u64, t: u64) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if i >= 63 { 0 } else { s >> (i + 1) };
        inversions += above.count_ones();
    }
    Some(inversions % 2 == 1)
}

impl GrassmannElt {
    pub fn zero(degree_bound: u32) -> Self {
        assert!(degree_bound <= MAX_DEGREE_BOUND, "degree bound too large");
        GrassmannElt {
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(degree_bound: u32, c: Rational) -> Self {
        let mut e = Self::zero(degree_bound);
        e.add_term(0, c);
        e
    }

    pub fn one(degree_bound: u32) -> Self {
        Self::scalar(degree_bound, Rational::one())
    }

    /// The generator θ_i, 1-based.
    pub fn generator(degree_bound: u32, i: u32) -> Self {
        Self::monomial(degree_bound, &[i], Rational::one())
    }

    /// c · θ_{i1} θ_{i2} ⋯ in the given (not necessarily sorted) order.
    pub fn monomial(degree_bound: u32, indices: &[u32], c: Rational) -> Self {
        let mut mask = 0u64;
        let mut negative = false;
        for &i in indices {
            assert!(i >= 1 && i <= degree_bound, "generator index {i} out of range");
            let bit = 1u64 << (i - 1);
            match merge_sign(mask, bit) {
                None => return Self::zero(degree_bound),
                Some(s) => negative ^= s,
            }
            mask |= bit;
        }
        let mut e = Self::zero(degree_bound);
        e.add_term(mask, if negative { -c } else { c });
        e
    }

    pub fn from_terms(degree_bound: u32, terms: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut e = Self::zero(degree_bound);
        for (s, c) in terms {
            assert!(
                s >> degree_bound == 0,
                "subset exceeds degree bound"
            );
            e.add_term(s, c);
        }
        e
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, subset: u64) -> Rational {
        self.terms.get(&subset).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, s: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(s).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    /// Re-tag with a larger degree bound; terms are unchanged.
    pub fn promote(&self, degree_bound: u32) -> Result<Self> {
        if degree_bound < self.degree_bound {
            return Err(Error::DegreeBoundMismatch(self.degree_bound, degree_bound));
        }
        Ok(GrassmannElt {
            degree_bound,
            terms: self.terms.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parity if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|s| Parity::from_bit(s.count_ones() as usize));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_some()
    }

    /// Z₊-degree-k component.
    pub fn degree_component(&self, k: u32) -> Self {
        Self::from_terms(
            self.degree_bound,
            self.terms
                .iter()
                .filter(|(s, _)| s.count_ones() == k)
                .map(|(s, c)| (*s, c.clone())),
        )
    }

    pub fn parity_component(&self, p: Parity) -> Self {
        Self::from_terms(
            self.degree_bound,
            self.terms
                .iter()
                .filter(|(s, _)| Parity::from_bit(s.count_ones() as usize) == p)
                .map(|(s, c)| (*s, c.clone())),
        )
    }

    /// Augmentation λ ↦ λ₀.
    pub fn specialise(&self) -> Rational {
        self.coefficient(0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_bound(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_bound(other)?;
        let mut out = Self::zero(self.degree_bound);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                if let Some(negative) = merge_sign(*s, *t) {
                    let c = a * b;
                    out.add_term(s | t, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    fn check_bound(&self, other: &Self) -> Result<()> {
        if self.degree_bound != other.degree_bound {
            Err(Error::DegreeBoundMismatch(self.degree_bound, other.degree_bound))
        } else {
            Ok(())
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree_bound);
        }
        GrassmannElt {
            degree_bound: self.degree_bound,
            terms: self.terms.iter().map(|(s, x)| (*s, x * c)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        GrassmannElt {
            degree_bound: self.degree_bound,
            terms: self.terms.iter().map(|(s, x)| (*s, -x)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.degree_bound);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same degree bound");
        }
        acc
    }

    /// Inverse via the terminating series λ₀⁻¹ Σ (−λ₀⁻¹ (a − λ₀))^i.
    pub fn invert(&self) -> Result<Self> {
        let l0 = self.specialise();
        if l0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = l0.recip();
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let step = nil.scaled(&-inv0.clone());
        let mut sum = Self::one(self.degree_bound);
        let mut power = Self::one(self.degree_bound);
        loop {
            power = power.try_mul(&step)?;
            if power.is_zero() {
                break;
            }
            sum = sum.try_add(&power)?;
        }
        Ok(sum.scaled(&inv0))
    }
}

/// Product in Λ(N); both factors must carry the same degree bound.
pub fn ga_mul(a: &GrassmannElt, b: &GrassmannElt) -> Result<GrassmannElt> {
    a.try_mul(b)
}

pub fn ga_specialise(a: &GrassmannElt) -> Rational {
    a.specialise()
}

pub fn ga_invert(a: &GrassmannElt) -> Result<GrassmannElt> {
    a.invert()
}

/// Re-tag both operands with the larger degree bound.
pub fn ga_promote(a: &GrassmannElt, b: &GrassmannElt) -> (GrassmannElt, GrassmannElt) {
    let n = a.degree_bound.max(b.degree_bound);
    (a.promote(n).unwrap(), b.promote(n).unwrap())
}

impl Coefficient for GrassmannElt {
    type Ctx = u32;

    fn zero_in(n: &u32) -> Self {
        GrassmannElt::zero(*n)
    }
    fn one_in(n: &u32) -> Self {
        GrassmannElt::one(*n)
    }
    fn from_rational(n: &u32, x: &Rational) -> Self {
        GrassmannElt::scalar(*n, x.clone())
    }
    fn ctx(&self) -> u32 {
        self.degree_bound
    }
    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("coefficients share a degree bound")
    }
    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("coefficients share a degree bound")
    }
    fn negate(&self) -> Self {
        self.negated()
    }
    fn scale(&self, x: &Rational) -> Self {
        self.scaled(x)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn has_parity(&self, p: Parity) -> bool {
        self.terms
            .keys()
            .all(|s| Parity::from_bit(s.count_ones() as usize) == p)
    }
    fn grade_involution(&self) -> Self {
        GrassmannElt {
            degree_bound: self.degree_bound,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (*s, if s.count_ones() % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }
    fn augmentation(&self) -> Rational {
        self.specialise()
    }
    fn try_invert(&self) -> Result<Self> {
        self.invert()
    }
    fn nilpotency_bound(n: &u32) -> usize {
        *n as usize + 1
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GrassmannElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (s, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let idx: Vec<String> = (0..64)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            write!(f, "{}*t{{{}}}", fmt_rational(c), idx.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GrassmannElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ({})[{}]", self.degree_bound, self)
    }
}

impl GrassmannElt {
    /// Parse the `c*t{i,j,...}` text form. The degree bound is taken as the
    /// given value, which must cover every index that appears.
    pub fn parse(text: &str, degree_bound: u32) -> Result<Self> {
        let text = text.trim();
        let mut e = Self::zero(degree_bound);
        if text == "0" {
            return Ok(e);
        }
        for raw in text.split(" + ") {
            let (c, rest) = raw
                .trim()
                .split_once("*t{")
                .ok_or_else(|| Error::Parse(format!("bad term {raw:?}")))?;
            let inner = rest
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(format!("bad term {raw:?}")))?;
            let c = parse_rational(c)?;
            let idx: Vec<u32> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index in {raw:?}"))))
                    .collect::<Result<_>>()?
            };
            if idx.iter().any(|&i| i == 0 || i > degree_bound) {
                return Err(Error::Parse(format!("index out of range in {raw:?}")));
            }
            e = e.try_add(&Self::monomial(degree_bound, &idx, c))?;
        }
        Ok(e)
    }
}

impl FromStr for GrassmannElt {
    type Err = Error;

    /// Parses with the smallest degree bound covering the indices present.
    fn from_str(s: &str) -> Result<Self> {
        let wide = Self::parse(s, MAX_DEGREE_BOUND)?;
        let top = wide.terms.keys().map(|s| 64 - s.leading_zeros()).max().unwrap_or(0);
        Ok(GrassmannElt {
            degree_bound: top,
            terms: wide.terms,
        })
    }
}
