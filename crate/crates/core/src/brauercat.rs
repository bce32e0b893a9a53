//! The Brauer category B(δ) with a rational loop parameter.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, Rational};

/// A (k, l) Brauer diagram: a perfect matching of k bottom points
/// (encoded 0..k) and l top points (encoded k..k+l).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    k: usize,
    l: usize,
    pairs: Vec<(usize, usize)>,
}

/// Endpoint of a strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Bottom(usize),
    Top(usize),
}

impl BrauerDiagram {
    /// Build from arbitrary pairs of encoded points; canonicalizes.
    pub fn new(k: usize, l: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut seen = vec![false; k + l];
        for &(a, b) in &pairs {
            if a == b || b >= k + l || seen[a] || seen[b] {
                return Err(Error::ShapeMismatch(format!("not a perfect matching on {k}+{l} points")));
            }
            seen[a] = true;
            seen[b] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::ShapeMismatch(format!("not a perfect matching on {k}+{l} points")));
        }
        Ok(BrauerDiagram { k, l, pairs })
    }

    pub fn from_points(k: usize, l: usize, pairs: &[(Point, Point)]) -> Result<Self> {
        let enc = |p: Point| match p {
            Point::Bottom(i) => i,
            Point::Top(j) => k + j,
        };
        Self::new(k, l, pairs.iter().map(|&(a, b)| (enc(a), enc(b))))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn decode(&self, x: usize) -> Point {
        if x < self.k {
            Point::Bottom(x)
        } else {
            Point::Top(x - self.k)
        }
    }

    /// partner[x] for every encoded point x.
    pub fn partners(&self) -> Vec<usize> {
        let mut p = vec![0; self.k + self.l];
        for &(a, b) in &self.pairs {
            p[a] = b;
            p[b] = a;
        }
        p
    }

    pub fn identity(r: usize) -> Self {
        Self::new(r, r, (0..r).map(|i| (i, r + i))).unwrap()
    }

    /// The crossing X: 2 → 2.
    pub fn crossing() -> Self {
        Self::new(2, 2, [(0, 3), (1, 2)]).unwrap()
    }

    /// The cap A: 2 → 0.
    pub fn cap() -> Self {
        Self::new(2, 0, [(0, 1)]).unwrap()
    }

    /// The cup U: 0 → 2.
    pub fn cup() -> Self {
        Self::new(0, 2, [(0, 1)]).unwrap()
    }

    /// Nested caps A_q: bottom i joined to bottom 2q−1−i.
    pub fn nested_caps(q: usize) -> Self {
        Self::new(2 * q, 0, (0..q).map(|i| (i, 2 * q - 1 - i))).unwrap()
    }

    /// Nested cups U_q: top j joined to top 2q−1−j.
    pub fn nested_cups(q: usize) -> Self {
        Self::new(0, 2 * q, (0..q).map(|j| (j, 2 * q - 1 - j))).unwrap()
    }

    /// The permutation diagram of σ (bottom j joined to top σ(j)).
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let r = sigma.len();
        Self::new(r, r, sigma.iter().enumerate().map(|(j, &s)| (j, r + s)))
    }

    /// s_i (1-based): crossing of strands i and i+1.
    pub fn s(r: usize, i: usize) -> Self {
        let mut sigma: Vec<usize> = (0..r).collect();
        sigma.swap(i - 1, i);
        Self::permutation(&sigma).unwrap()
    }

    /// e_i (1-based): cap then cup on strands i and i+1.
    pub fn e(r: usize, i: usize) -> Self {
        let mut pairs: Vec<(usize, usize)> = (0..r).filter(|&j| j != i - 1 && j != i).map(|j| (j, r + j)).collect();
        pairs.push((i - 1, i));
        pairs.push((r + i - 1, r + i));
        Self::new(r, r, pairs).unwrap()
    }

    /// D2 ∘ self (self applied first); returns the diagram and loop count.
    pub fn then(&self, d2: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
        compose_diagrams(d2, self)
    }

    pub fn tensor(&self, other: &BrauerDiagram) -> BrauerDiagram {
        tensor_diagrams(self, other)
    }

    /// Bottom-bottom pairs, top-top pairs, and through strands
    /// (bottom, top) in decoded coordinates.
    pub fn classify(&self) -> (Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let (mut caps, mut cups, mut through) = (Vec::new(), Vec::new(), Vec::new());
        for &(a, b) in &self.pairs {
            match (self.decode(a), self.decode(b)) {
                (Point::Bottom(x), Point::Bottom(y)) => caps.push((x, y)),
                (Point::Top(x), Point::Top(y)) => cups.push((x, y)),
                (Point::Bottom(x), Point::Top(y)) => through.push((x, y)),
                (Point::Top(_), Point::Bottom(_)) => unreachable!("pairs are ordered"),
            }
        }
        (caps, cups, through)
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: Point| match p {
            Point::Bottom(i) => format!("b{}", i + 1),
            Point::Top(j) => format!("t{}", j + 1),
        };
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(a, b)| format!("{}-{}", name(self.decode(a)), name(self.decode(b))))
            .collect();
        write!(f, "({},{})[{}]", self.k, self.l, parts.join(" "))
    }
}

/// d2 ∘ d1: glue the top of d1 to the bottom of d2.
pub fn compose_diagrams(d2: &BrauerDiagram, d1: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
    if d1.l != d2.k {
        return Err(Error::ShapeMismatch(format!("cannot compose ({},{}) after ({},{})", d2.k, d2.l, d1.k, d1.l)));
    }
    let (k, mid, p) = (d1.k, d1.l, d2.l);
    let p1 = d1.partners();
    let p2 = d2.partners();
    let mut visited = vec![false; mid];
    // follow a strand entering d1 at point x; returns the outer endpoint
    let walk_from_d1 = |mut x: usize, visited: &mut Vec<bool>| -> usize {
        loop {
            let y = p1[x];
            if y < k {
                return y;
            }
            let m = y - k;
            visited[m] = true;
            let z = p2[m];
            if z >= mid {
                return k + (z - mid);
            }
            visited[z] = true;
            x = k + z;
        }
    };
    let walk_from_d2 = |mut x: usize, visited: &mut Vec<bool>| -> usize {
        loop {
            let y = p2[x];
            if y >= mid {
                return k + (y - mid);
            }
            visited[y] = true;
            let z = p1[k + y];
            if z < k {
                return z;
            }
            let m = z - k;
            visited[m] = true;
            x = m;
        }
    };
    let mut pairs = Vec::new();
    let mut done = vec![false; k + p];
    for b in 0..k {
        if !done[b] {
            let e = walk_from_d1(b, &mut visited);
            done[b] = true;
            done[e] = true;
            pairs.push((b, e));
        }
    }
    for t in 0..p {
        if !done[k + t] {
            let e = walk_from_d2(mid + t, &mut visited);
            done[k + t] = true;
            done[e] = true;
            pairs.push((k + t, e));
        }
    }
    let mut loops = 0;
    for m in 0..mid {
        if visited[m] {
            continue;
        }
        loops += 1;
        let mut cur = m;
        loop {
            visited[cur] = true;
            let other = p2[cur];
            visited[other] = true;
            let next = p1[k + other] - k;
            if visited[next] {
                break;
            }
            cur = next;
        }
    }
    Ok((BrauerDiagram::new(k, p, pairs)?, loops))
}

/// Side by side, `left` first.
pub fn tensor_diagrams(left: &BrauerDiagram, right: &BrauerDiagram) -> BrauerDiagram {
    let (k, k2, l) = (left.k, right.k, left.l);
    let kk = k + k2;
    let map_left = |x: usize| if x < k { x } else { kk + (x - k) };
    let map_right = |x: usize| if x < k2 { k + x } else { kk + l + (x - k2) };
    let pairs = left
        .pairs
        .iter()
        .map(|&(a, b)| (map_left(a), map_left(b)))
        .chain(right.pairs.iter().map(|&(a, b)| (map_right(a), map_right(b))));
    BrauerDiagram::new(kk, l + right.l, pairs).expect("disjoint matchings")
}

/// All (k, l) diagrams in canonical order; (k+l−1)!! of them.
pub fn enumerate_diagrams(k: usize, l: usize) -> Vec<BrauerDiagram> {
    let total = k + l;
    if total % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut used = vec![false; total];
    let mut current = Vec::new();
    fn rec(used: &mut Vec<bool>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some(a) = used.iter().position(|u| !u) else {
            out.push(current.clone());
            return;
        };
        used[a] = true;
        for b in a + 1..used.len() {
            if !used[b] {
                used[b] = true;
                current.push((a, b));
                rec(used, current, out);
                current.pop();
                used[b] = false;
            }
        }
        used[a] = false;
    }
    let mut raw = Vec::new();
    rec(&mut used, &mut current, &mut raw);
    for pairs in raw {
        out.push(BrauerDiagram::new(k, l, pairs).unwrap());
    }
    out
}

pub fn double_factorial_odd(n: usize) -> u64 {
    // (2j−1)!! for total = 2j points; n = total
    if n % 2 == 1 {
        return 0;
    }
    (1..n as u64).step_by(2).product::<u64>().max(1)
}

/// A rational combination of (k, l) diagrams with loop parameter δ.
#[derive(Debug, Clone, PartialEq)]
pub struct BrauerElt {
    pub k: usize,
    pub l: usize,
    pub delta: Rational,
    terms: BTreeMap<BrauerDiagram, Rational>,
}

impl BrauerElt {
    pub fn zero(k: usize, l: usize, delta: Rational) -> Self {
        BrauerElt { k, l, delta, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: BrauerDiagram, delta: Rational) -> Self {
        let mut e = Self::zero(d.k, d.l, delta);
        e.terms.insert(d, Rational::one());
        e
    }

    pub fn from_terms(
        k: usize,
        l: usize,
        delta: Rational,
        terms: impl IntoIterator<Item = (BrauerDiagram, Rational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(k, l, delta);
        for (d, c) in terms {
            if d.k != k || d.l != l {
                return Err(Error::ShapeMismatch("diagram arities differ".into()));
            }
            e.add_term(d, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, d: BrauerDiagram, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.get(&d).cloned().unwrap_or_else(Rational::zero) + c;
        if sum.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BrauerDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn identity(r: usize, delta: Rational) -> Self {
        Self::from_diagram(BrauerDiagram::identity(r), delta)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.k, self.l, self.delta.clone());
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x * c);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.delta != other.delta {
            return Err(Error::ShapeMismatch("loop parameters differ".into()));
        }
        if self.k != other.k || self.l != other.l {
            return Err(Error::ShapeMismatch("arities differ".into()));
        }
        Ok(())
    }

    fn delta_pow(&self, loops: usize) -> Rational {
        num_traits::pow(self.delta.clone(), loops)
    }
}

/// d2 ∘ d1, bilinear, each closed loop contributing δ.
pub fn compose(d2: &BrauerElt, d1: &BrauerElt) -> Result<BrauerElt> {
    if d1.delta != d2.delta {
        return Err(Error::ShapeMismatch("loop parameters differ".into()));
    }
    if d1.l != d2.k {
        return Err(Error::ShapeMismatch(format!("cannot compose ({},{}) after ({},{})", d2.k, d2.l, d1.k, d1.l)));
    }
    let mut out = BrauerElt::zero(d1.k, d2.l, d1.delta.clone());
    for (a, ca) in &d1.terms {
        for (b, cb) in &d2.terms {
            let (d, loops) = compose_diagrams(b, a)?;
            out.add_term(d, ca * cb * out.delta_pow(loops));
        }
    }
    Ok(out)
}

pub fn tensor(left: &BrauerElt, right: &BrauerElt) -> Result<BrauerElt> {
    if left.delta != right.delta {
        return Err(Error::ShapeMismatch("loop parameters differ".into()));
    }
    let mut out = BrauerElt::zero(left.k + right.k, left.l + right.l, left.delta.clone());
    for (a, ca) in &left.terms {
        for (b, cb) in &right.terms {
            out.add_term(tensor_diagrams(a, b), ca * cb);
        }
    }
    Ok(out)
}

/// 𝕌_p^q: B_{p+q}^r → B_p^{r+q}, x ↦ (x ⊗ I_q) ∘ (I_p ⊗ U_q).
pub fn transfer_u(p: usize, q: usize, x: &BrauerElt) -> Result<BrauerElt> {
    if x.k != p + q {
        return Err(Error::ShapeMismatch(format!("transfer_U({p},{q}) needs source {}, got {}", p + q, x.k)));
    }
    let delta = x.delta.clone();
    let left = tensor(x, &BrauerElt::identity(q, delta.clone()))?;
    let right = BrauerElt::from_diagram(
        tensor_diagrams(&BrauerDiagram::identity(p), &BrauerDiagram::nested_cups(q)),
        delta,
    );
    compose(&left, &right)
}

/// 𝔸^r_q: B_p^{r+q} → B_{p+q}^r, y ↦ (I_r ⊗ A_q) ∘ (y ⊗ I_q).
pub fn transfer_a(q: usize, y: &BrauerElt) -> Result<BrauerElt> {
    if y.l < q {
        return Err(Error::ShapeMismatch(format!("transfer_A({q}) needs target at least {q}, got {}", y.l)));
    }
    let r = y.l - q;
    let delta = y.delta.clone();
    let right = tensor(y, &BrauerElt::identity(q, delta.clone()))?;
    let left = BrauerElt::from_diagram(
        tensor_diagrams(&BrauerDiagram::identity(r), &BrauerDiagram::nested_caps(q)),
        delta,
    );
    compose(&left, &right)
}

/// B_r(δ): diagram basis and multiplication table.
#[derive(Debug, Clone, Serialize)]
pub struct BrauerAlgebra {
    pub r: usize,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_diagrams")]
    pub basis: Vec<BrauerDiagram>,
    /// table[i][j] = (index of basis[i] ∘ basis[j], number of loops).
    pub table: Vec<Vec<(usize, usize)>>,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

fn ser_diagrams<S: serde::Serializer>(x: &[BrauerDiagram], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|d| d.to_string()))
}

pub fn brauer_algebra(r: usize, delta: Rational) -> BrauerAlgebra {
    let basis = enumerate_diagrams(r, r);
    let index: BTreeMap<&BrauerDiagram, usize> = basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let table = basis
        .par_iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let (d, loops) = compose_diagrams(a, b).expect("same arity");
                    (index[&d], loops)
                })
                .collect()
        })
        .collect();
    BrauerAlgebra { r, delta, basis, table }
}

impl BrauerAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> (Vec<BrauerDiagram>, Vec<BrauerDiagram>) {
        let s = (1..self.r).map(|i| BrauerDiagram::s(self.r, i)).collect();
        let e = (1..self.r).map(|i| BrauerDiagram::e(self.r, i)).collect();
        (s, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q2};
    use proptest::prelude::*;

    fn elt(d: BrauerDiagram, delta: &Rational) -> BrauerElt {
        BrauerElt::from_diagram(d, delta.clone())
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_diagrams(4, 0).len(), 3);
        assert_eq!(enumerate_diagrams(2, 2).len(), 3);
        assert!(enumerate_diagrams(3, 0).is_empty());
        for t in 0..=8 {
            let n = enumerate_diagrams(t / 2, t - t / 2).len() as u64;
            assert_eq!(n, double_factorial_odd(t));
        }
        assert_eq!(brauer_algebra(3, q(1)).dim(), 15);
    }

    #[test]
    fn generator_relations() {
        let delta = q2(-3, 2);
        let r = 4;
        let s = |i| elt(BrauerDiagram::s(r, i), &delta);
        let e = |i| elt(BrauerDiagram::e(r, i), &delta);
        let c = |a: &BrauerElt, b: &BrauerElt| compose(a, b).unwrap();
        let id = BrauerElt::identity(r, delta.clone());
        for i in 1..r {
            assert_eq!(c(&e(i), &e(i)), e(i).scale(&delta));
            assert_eq!(c(&s(i), &s(i)), id);
            assert_eq!(c(&e(i), &s(i)), e(i));
            assert_eq!(c(&s(i), &e(i)), e(i));
            if i + 1 < r {
                assert_eq!(c(&c(&s(i), &s(i + 1)), &s(i)), c(&c(&s(i + 1), &s(i)), &s(i + 1)));
                assert_eq!(c(&c(&e(i), &e(i + 1)), &e(i)), e(i));
                assert_eq!(c(&c(&e(i + 1), &e(i)), &e(i + 1)), e(i + 1));
            }
            for j in 1..r {
                if i.abs_diff(j) > 1 {
                    assert_eq!(c(&s(i), &s(j)), c(&s(j), &s(i)));
                    assert_eq!(c(&e(i), &e(j)), c(&e(j), &e(i)));
                    assert_eq!(c(&s(i), &e(j)), c(&e(j), &s(i)));
                }
            }
        }
    }

    #[test]
    fn cap_after_cup_is_delta() {
        let delta = q(-1);
        let a = elt(BrauerDiagram::cap(), &delta);
        let u = elt(BrauerDiagram::cup(), &delta);
        let au = compose(&a, &u).unwrap();
        assert_eq!(au, elt(BrauerDiagram::new(0, 0, []).unwrap(), &delta).scale(&delta));
        // (A ⊗ A) ∘ (U ⊗ U) = δ²
        let aa = tensor(&a, &a).unwrap();
        let uu = tensor(&u, &u).unwrap();
        assert_eq!(compose(&aa, &uu).unwrap(), elt(BrauerDiagram::new(0, 0, []).unwrap(), &delta).scale(&q(1)));
        let delta3 = q(3);
        let a3 = elt(BrauerDiagram::cap(), &delta3);
        let u3 = elt(BrauerDiagram::cup(), &delta3);
        let v = compose(&tensor(&a3, &a3).unwrap(), &tensor(&u3, &u3).unwrap()).unwrap();
        assert_eq!(v, elt(BrauerDiagram::new(0, 0, []).unwrap(), &delta3).scale(&q(9)));
        // nested: A_2 ∘ U_2 = δ²
        let v2 = compose(&elt(BrauerDiagram::nested_caps(2), &delta3), &elt(BrauerDiagram::nested_cups(2), &delta3)).unwrap();
        assert_eq!(v2, elt(BrauerDiagram::new(0, 0, []).unwrap(), &delta3).scale(&q(9)));
    }

    #[test]
    fn tensor_of_identities() {
        let i1 = BrauerDiagram::identity(1);
        assert_eq!(i1.tensor(&i1), BrauerDiagram::identity(2));
    }

    #[test]
    fn transfer_round_trips() {
        let delta = q(2);
        for d in enumerate_diagrams(4, 0) {
            for q_ in 0..=4 {
                let x = elt(d.clone(), &delta);
                let u = transfer_u(4 - q_, q_, &x).unwrap();
                assert_eq!(transfer_a(q_, &u).unwrap(), x);
            }
        }
        for d in enumerate_diagrams(2, 2) {
            let x = elt(d, &delta);
            assert_eq!(transfer_u(2, 0, &x).unwrap(), x);
            assert_eq!(transfer_a(0, &x).unwrap(), x);
            let y = transfer_a(2, &x).unwrap();
            assert_eq!(transfer_u(2, 2, &y).unwrap(), x);
        }
        // 𝕌 of the identity of B_2 gives the (0,4) nested cups
        let id = BrauerElt::identity(2, delta.clone());
        let u = transfer_u(0, 2, &id).unwrap();
        assert_eq!(u, elt(BrauerDiagram::new(0, 4, [(0, 3), (1, 2)]).unwrap(), &delta));
    }

    #[test]
    fn symmetric_group_subalgebra_has_dimension_r_factorial() {
        let r = 4;
        let alg = brauer_algebra(r, q(1));
        let (s, _) = alg.generators();
        let mut reached: std::collections::BTreeSet<BrauerDiagram> = [BrauerDiagram::identity(r)].into();
        let mut frontier: Vec<BrauerDiagram> = reached.iter().cloned().collect();
        while let Some(d) = frontier.pop() {
            for g in &s {
                let (p, loops) = compose_diagrams(g, &d).unwrap();
                assert_eq!(loops, 0);
                if reached.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
        assert_eq!(reached.len(), 24);
    }

    fn arb_diagram(k: usize, l: usize) -> impl Strategy<Value = BrauerDiagram> {
        let all = enumerate_diagrams(k, l);
        (0..all.len()).prop_map(move |i| all[i].clone())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn associativity_and_interchange(
            a in arb_diagram(2, 4), b in arb_diagram(4, 2), c in arb_diagram(2, 2),
            d in arb_diagram(1, 3), e in arb_diagram(3, 1),
        ) {
            let delta = q2(5, 3);
            let (a, b, c) = (elt(a, &delta), elt(b, &delta), elt(c, &delta));
            let lhs = compose(&compose(&c, &b).unwrap(), &a).unwrap();
            let rhs = compose(&c, &compose(&b, &a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let (d, e) = (elt(d, &delta), elt(e, &delta));
            // (b ⊗ e) ∘ (a ⊗ d) = (b ∘ a) ⊗ (e ∘ d)
            let lhs = compose(&tensor(&b, &e).unwrap(), &tensor(&a, &d).unwrap()).unwrap();
            let rhs = tensor(&compose(&b, &a).unwrap(), &compose(&e, &d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let t1 = tensor(&tensor(&a, &d).unwrap(), &c).unwrap();
            let t2 = tensor(&a, &tensor(&d, &c).unwrap()).unwrap();
            prop_assert_eq!(t1, t2);
        }

        #[test]
        fn canonical_form_is_order_independent(d in arb_diagram(3, 3), seed in any::<u64>()) {
            let mut pairs: Vec<(usize, usize)> = d.pairs().iter().map(|&(a, b)| if seed % 2 == 0 { (b, a) } else { (a, b) }).collect();
            pairs.rotate_left((seed % 3) as usize);
            prop_assert_eq!(BrauerDiagram::new(3, 3, pairs).unwrap(), d);
        }
    }
}
